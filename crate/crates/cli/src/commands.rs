use std::path::Path;
use std::process::ExitCode;

use prep_core::analytic::{
    qubit_decompose, spin1_decompose, spin1_is_prep, spin1_kappa_e, witness_scan, WitnessReport, WitnessScan,
    SPIN1_TOLERANCE, WITNESS_TOLERANCE,
};
use prep_core::angular::{coherent_ket, Spin};
use prep_core::bipartite::{
    bipartite_boundary_kappa, bipartite_decide, partial_trace_witness, ppt_check, ppt_kappa, scan2d,
    BipartiteOptions, ProductMixture, ScanOptions,
};
use prep_core::density::{LoadedState, StateFile};
use prep_core::lpsolve::{
    boundary_kappa, decide_prep, fibonacci_grid, BoundaryOptions, BoundaryStep, DecideOptions,
};
use prep_core::linalg::{identity, CMatrix, C64};
use prep_core::random::{random_density, random_direction, random_sphere_point, rng_from_seed};
use prep_core::{DeltaMixture, Norm, ScaledFamily, VERSION};
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{emit_json, emit_text, fail, read_state, Failure, MISMATCH, NOT_CONVERGED};
use crate::{Command, GenKind};

type CmdResult = Result<ExitCode, Failure>;

/// Coherent projectors on A used to condition two-spin states.
const CONDITIONING_AXES: usize = 24;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Decide { state, n, refine, tol, raw, out } => decide(&state, n, refine, tol, raw, out.as_deref()),
        Command::Boundary { direction, toward, schedule, tol, norm, out } => {
            boundary(&direction, toward, schedule, tol, norm.into(), out.as_deref())
        }
        Command::Scan2d { dir1, dir2, rays, schedule, tol, norm, out } => {
            scan(&dir1, &dir2, rays, schedule, tol, norm.into(), out.as_deref())
        }
        Command::Witness { state, scan, raw, out } => witness(&state, scan, raw, out.as_deref()),
        Command::Decompose { state, out } => decompose(&state, out.as_deref()),
        Command::Gen { kind, seed, twice_j, twice_j_b, p, out } => gen(kind, seed, twice_j, twice_j_b, p, out.as_deref()),
    }
}

fn meta(command: &str, norm: Option<Norm>, tolerances: Value) -> Value {
    json!({
        "tool": "prep",
        "version": VERSION,
        "command": command,
        "norm": norm.map(Norm::name),
        "tolerances": tolerances,
    })
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(NOT_CONVERGED)
    }
}

/// Three-valued answer; serializes as `true`, `false` or `"unresolved"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Classical,
    NonClassical,
    Unresolved,
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::Classical => s.serialize_bool(true),
            Verdict::NonClassical => s.serialize_bool(false),
            Verdict::Unresolved => s.serialize_str("unresolved"),
        }
    }
}

#[derive(Serialize)]
struct Decided {
    prep: Verdict,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_size: Option<usize>,
}

impl Decided {
    fn new(prep: Verdict, method: &'static str) -> Self {
        Self { prep, method, certificate: None, witness: None, residual: None, grid_size: None }
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn decide(path: &Path, n: Option<usize>, refine: usize, tol: f64, raw: bool, out: Option<&Path>) -> CmdResult {
    let state = read_state(path, raw)?;
    let (decided, tolerances) = match &state {
        LoadedState::Single { spin, matrix } => {
            let n = n.unwrap_or(DecideOptions::default().grid_n);
            let opts = DecideOptions { grid_n: n, tolerance: tol, refine_rounds: refine };
            (decide_single(matrix, *spin, &opts)?, json!({ "residual": tol, "witness": WITNESS_TOLERANCE, "z_criterion": SPIN1_TOLERANCE, "grid_n": n, "refine_rounds": refine }))
        }
        LoadedState::Bipartite { spin_a, spin_b, matrix } => {
            let opts = match n {
                Some(n) => single_level(*spin_a, *spin_b, n),
                None => BipartiteOptions::for_spins(*spin_a, *spin_b, 3),
            };
            let tolerances = json!({ "residual": tol, "witness": WITNESS_TOLERANCE, "schedule": opts.schedule });
            (decide_bipartite(matrix, *spin_a, *spin_b, &opts, tol)?, tolerances)
        }
    };
    let ok = decided.prep != Verdict::Unresolved;
    emit_json(&json!({ "meta": meta("decide", None, tolerances), "result": decided }), out)?;
    Ok(status(ok))
}

fn decide_single(rho: &CMatrix, spin: Spin, opts: &DecideOptions) -> Result<Decided, Failure> {
    if spin == Spin::HALF {
        let mix = qubit_decompose(rho)?;
        let mut d = Decided::new(Verdict::Classical, "bloch");
        d.residual = Some(mix.residual(spin, rho));
        d.certificate = Some(to_value(&mix));
        return Ok(d);
    }
    let scan = witness_scan(rho, spin, 2000)?;
    if spin == Spin::ONE {
        let (prep, z_min) = spin1_is_prep(rho)?;
        if prep {
            let mix = spin1_decompose(rho)?;
            let mut d = Decided::new(Verdict::Classical, "spin1-z-criterion");
            d.residual = Some(mix.residual(spin, rho));
            d.certificate = Some(to_value(&mix));
            return Ok(d);
        }
        let mut d = Decided::new(Verdict::NonClassical, "spin1-z-criterion");
        d.witness = Some(json!({ "z_min_eigenvalue": z_min, "moment": scan.worst() }));
        return Ok(d);
    }
    if scan.violated() {
        let mut d = Decided::new(Verdict::NonClassical, "moment-witness");
        d.witness = Some(to_value(scan.worst()));
        return Ok(d);
    }
    let lp = decide_prep(rho, spin, opts)?;
    let verdict = if lp.prep { Verdict::Classical } else { Verdict::Unresolved };
    let mut d = Decided::new(verdict, "grid-lp");
    d.residual = Some(lp.residual);
    d.grid_size = Some(lp.grid_size);
    d.certificate = Some(to_value(&lp.mixture));
    if !lp.prep {
        d.witness = Some(to_value(scan.worst()));
    }
    Ok(d)
}

fn decide_bipartite(rho: &CMatrix, a: Spin, b: Spin, opts: &BipartiteOptions, tol: f64) -> Result<Decided, Failure> {
    let (pt_min, ppt) = ppt_check(rho, a, b)?;
    if !ppt {
        let mut d = Decided::new(Verdict::NonClassical, "partial-transpose");
        d.witness = Some(json!({ "partial_transpose_min_eigenvalue": pt_min }));
        return Ok(d);
    }
    if let Some(w) = conditional_witness(rho, a, b)? {
        let mut d = Decided::new(Verdict::NonClassical, "conditional-state");
        d.witness = Some(w);
        return Ok(d);
    }
    let lp = bipartite_decide(rho, a, b, opts, tol)?;
    let verdict = if lp.prep { Verdict::Classical } else { Verdict::Unresolved };
    let mut d = Decided::new(verdict, "product-grid-lp");
    d.residual = Some(lp.residual);
    d.grid_size = Some(lp.grid_size);
    d.certificate = Some(to_value(&lp.mixture));
    Ok(d)
}

/// Conditions B on the identity and on coherent projectors of A; any
/// non-classical conditional state refutes classicality of the whole.
fn conditional_witness(rho: &CMatrix, a: Spin, b: Spin) -> Result<Option<Value>, Failure> {
    let mut filters = vec![(None, identity(a.dim()))];
    for alpha in fibonacci_grid(CONDITIONING_AXES).points() {
        filters.push((Some(*alpha), coherent_ket(a, *alpha).projector()));
    }
    for (alpha, v) in filters {
        let verdict = match partial_trace_witness(rho, a, b, &v) {
            Ok(v) => v,
            Err(prep_core::Error::DegenerateConditional(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let report = if let Some((false, z_min)) = verdict.spin1 {
            Some(json!({ "z_min_eigenvalue": z_min }))
        } else if b != Spin::HALF && b != Spin::ONE {
            let scan = witness_scan(&verdict.rho_b, b, 500)?;
            scan.violated().then(|| json!({ "moment": scan.worst() }))
        } else {
            None
        };
        if let Some(mut r) = report {
            r["filter_direction"] = to_value(alpha);
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn single_level(a: Spin, b: Spin, n: usize) -> BipartiteOptions {
    let mut opts = BipartiteOptions::for_spins(a, b, 0);
    opts.schedule = vec![(n, n * b.dim() / a.dim() + 1)];
    opts
}

#[derive(Serialize)]
struct BoundaryReport<M: Serialize> {
    kappa_e: f64,
    converged: bool,
    grid_size: usize,
    residual: f64,
    kappa_positivity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa_ppt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa_e_analytic: Option<f64>,
    history: Vec<BoundaryStep>,
    mixture: M,
}

fn boundary(path: &Path, toward: bool, schedule: Option<Vec<usize>>, tol: Option<f64>, norm: Norm, out: Option<&Path>) -> CmdResult {
    let state = read_state(path, !toward)?;
    let family_of = |m: &CMatrix| -> Result<ScaledFamily, Failure> {
        Ok(if toward { ScaledFamily::toward(m, norm)? } else { ScaledFamily::new(m.clone(), norm)? })
    };
    match &state {
        LoadedState::Single { spin, matrix } => {
            let family = family_of(matrix)?;
            let tol = tol.unwrap_or(1e-4);
            let mut opts = BoundaryOptions { tolerance: tol, ..BoundaryOptions::default() };
            if let Some(s) = schedule {
                opts.schedule = s;
            }
            let r = boundary_kappa(&family, *spin, &opts)?;
            let analytic = if *spin == Spin::ONE { Some(spin1_kappa_e(&family)?) } else { None };
            let report = BoundaryReport {
                kappa_e: r.kappa_e,
                converged: r.converged,
                grid_size: r.grid_size,
                residual: r.residual,
                kappa_positivity: family.positivity_kappa(),
                kappa_ppt: None,
                kappa_e_analytic: analytic,
                history: r.history,
                mixture: r.mixture,
            };
            let tolerances = json!({ "relative": tol, "schedule": opts.schedule });
            emit_json(&json!({ "meta": meta("boundary", Some(norm), tolerances), "result": report }), out)?;
            Ok(status(r.converged))
        }
        LoadedState::Bipartite { spin_a, spin_b, matrix } => {
            let family = family_of(matrix)?;
            // Product grids refine slowly; 1e-4 is rarely met before the
            // column count explodes.
            let tol = tol.unwrap_or(1e-3);
            let mut opts = BipartiteOptions::for_spins(*spin_a, *spin_b, 4);
            opts.tolerance = tol;
            if let Some(s) = schedule {
                opts.schedule = s.iter().map(|&n| (n, n * spin_b.dim() / spin_a.dim() + 1)).collect();
            }
            let r = bipartite_boundary_kappa(&family, *spin_a, *spin_b, &opts)?;
            let report: BoundaryReport<ProductMixture> = BoundaryReport {
                kappa_e: r.kappa_e,
                converged: r.converged,
                grid_size: r.grid_size,
                residual: r.residual,
                kappa_positivity: family.positivity_kappa(),
                kappa_ppt: Some(ppt_kappa(&family, *spin_a, *spin_b)?),
                kappa_e_analytic: None,
                history: r.history,
                mixture: r.mixture,
            };
            let tolerances = json!({ "relative": tol, "schedule": opts.schedule });
            emit_json(&json!({ "meta": meta("boundary", Some(norm), tolerances), "result": report }), out)?;
            Ok(status(r.converged))
        }
    }
}

fn two_spin(state: LoadedState, path: &Path) -> Result<(Spin, Spin, CMatrix), Failure> {
    match state {
        LoadedState::Bipartite { spin_a, spin_b, matrix } => Ok((spin_a, spin_b, matrix)),
        LoadedState::Single { .. } => Err(fail(MISMATCH, format!("{}: a two-spin direction is required", path.display()))),
    }
}

#[allow(clippy::too_many_arguments)]
fn scan(p1: &Path, p2: &Path, rays: usize, schedule: Option<Vec<usize>>, tol: f64, norm: Norm, out: Option<&Path>) -> CmdResult {
    let (a, b, d1) = two_spin(read_state(p1, true)?, p1)?;
    let (a2, b2, d2) = two_spin(read_state(p2, true)?, p2)?;
    if (a, b) != (a2, b2) {
        return Err(fail(MISMATCH, "the two directions belong to different spin pairs"));
    }
    let mut opts = ScanOptions::new(a, b, rays);
    opts.boundary = BipartiteOptions::for_spins(a, b, 3);
    opts.norm = norm;
    opts.boundary.tolerance = tol;
    if let Some(s) = schedule {
        opts.boundary.schedule = s.iter().map(|&n| (n, n * b.dim() / a.dim() + 1)).collect();
    }
    let result = scan2d(&d1, &d2, a, b, &opts)?;
    emit_text(&result.to_csv_string()?, out)?;
    let open: Vec<String> = result.rows.iter().filter(|r| !r.converged).map(|r| r.ray.to_string()).collect();
    if !open.is_empty() {
        eprintln!("prep: rays not converged to {tol:e}: {}", open.join(","));
    }
    Ok(status(open.is_empty()))
}

#[derive(Serialize)]
struct WitnessOut {
    violated: bool,
    worst: WitnessReport,
    scan: WitnessScan,
    #[serde(skip_serializing_if = "Option::is_none")]
    z_min_eigenvalue: Option<f64>,
}

fn witness(path: &Path, grid_n: usize, raw: bool, out: Option<&Path>) -> CmdResult {
    let state = read_state(path, raw)?;
    let LoadedState::Single { spin, matrix } = state else {
        return Err(fail(MISMATCH, "moment witnesses apply to a single spin"));
    };
    let scan = witness_scan(&matrix, spin, grid_n)?;
    let z = if spin == Spin::ONE { Some(spin1_is_prep(&matrix)?.1) } else { None };
    let report = WitnessOut { violated: scan.violated(), worst: scan.worst(), scan, z_min_eigenvalue: z };
    let tolerances = json!({ "witness": WITNESS_TOLERANCE, "grid_n": grid_n });
    emit_json(&json!({ "meta": meta("witness", None, tolerances), "result": report }), out)?;
    Ok(ExitCode::SUCCESS)
}

fn decompose(path: &Path, out: Option<&Path>) -> CmdResult {
    let state = read_state(path, false)?;
    let LoadedState::Single { spin, matrix } = state else {
        return Err(fail(MISMATCH, "closed-form decompositions exist for a single spin; use `decide` for two spins"));
    };
    let (mixture, method): (Option<DeltaMixture>, &str) = if spin == Spin::HALF {
        (Some(qubit_decompose(&matrix)?), "bloch")
    } else if spin == Spin::ONE {
        let (prep, _) = spin1_is_prep(&matrix)?;
        (if prep { Some(spin1_decompose(&matrix)?) } else { None }, "spin1-z-criterion")
    } else {
        let lp = decide_prep(&matrix, spin, &DecideOptions::default())?;
        (lp.prep.then_some(lp.mixture), "grid-lp")
    };
    let ok = mixture.is_some();
    let residual = mixture.as_ref().map(|m| m.residual(spin, &matrix));
    let result = json!({
        "prep": ok,
        "method": method,
        "points": mixture.as_ref().map(DeltaMixture::len),
        "residual": residual,
        "mixture": mixture,
    });
    let tolerances = json!({ "z_criterion": SPIN1_TOLERANCE, "residual": DecideOptions::default().tolerance });
    emit_json(&json!({ "meta": meta("decompose", None, tolerances), "result": result }), out)?;
    Ok(status(ok))
}

fn gen(kind: GenKind, seed: u64, twice_j: u32, twice_j_b: Option<u32>, p: f64, out: Option<&Path>) -> CmdResult {
    let mut rng = rng_from_seed(seed);
    let a = Spin::new(twice_j)?;
    let b = twice_j_b.map(Spin::new).transpose()?;
    let dim = a.dim() * b.map_or(1, Spin::dim);
    let matrix = match kind {
        GenKind::Random => random_density(dim, &mut rng),
        GenKind::Direction => random_direction(dim, &mut rng),
        GenKind::Coherent => {
            let pa = coherent_ket(a, random_sphere_point(&mut rng)).projector();
            match b {
                Some(b) => pa.kronecker(&coherent_ket(b, random_sphere_point(&mut rng)).projector()),
                None => pa,
            }
        }
        GenKind::Werner => {
            if !(0.0..=1.0).contains(&p) {
                return Err(fail(crate::output::MALFORMED, format!("singlet weight {p} outside [0, 1]")));
            }
            return write_state(&StateFile::bipartite(Spin::HALF, Spin::HALF, &werner(p)), out);
        }
    };
    let file = match b {
        Some(b) => StateFile::bipartite(a, b, &matrix),
        None => StateFile::single(a, &matrix),
    };
    write_state(&file, out)
}

fn werner(p: f64) -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = prep_core::linalg::CVector::from_vec(vec![
        C64::new(0.0, 0.0),
        C64::new(h, 0.0),
        C64::new(-h, 0.0),
        C64::new(0.0, 0.0),
    ]);
    (&psi * psi.adjoint()).scale(p) + identity(4).scale((1.0 - p) / 4.0)
}

fn write_state(file: &StateFile, out: Option<&Path>) -> CmdResult {
    let mut text = file.to_json()?;
    text.push('\n');
    emit_text(&text, out)?;
    Ok(ExitCode::SUCCESS)
}
