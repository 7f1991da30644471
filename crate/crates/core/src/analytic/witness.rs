use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::angular::{angular_momentum_ops, spin_component, Direction, Spin};
use crate::linalg::{ensure_square, trace_product, CMatrix};
use crate::lpsolve::fibonacci_grid;
use crate::{Error, Result};

/// Values below `−WITNESS_TOLERANCE` count as violations.
pub const WITNESS_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    SecondMoment,
    ThirdMoment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Violated,
    Satisfied,
}

/// Outcome of one moment inequality along one axis. A violation proves the
/// state is not classical; satisfaction proves nothing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub direction: [f64; 3],
    pub value: f64,
    pub verdict: Verdict,
}

impl WitnessReport {
    fn new(kind: WitnessKind, direction: [f64; 3], value: f64) -> Self {
        let verdict = if value < -WITNESS_TOLERANCE { Verdict::Violated } else { Verdict::Satisfied };
        Self { kind, direction, value, verdict }
    }

    pub fn violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }
}

fn check_dim(rho: &CMatrix, spin: Spin) -> Result<()> {
    let d = ensure_square(rho)?;
    if d != spin.dim() {
        return Err(Error::DimensionMismatch { expected: spin.dim(), found: d });
    }
    Ok(())
}

fn unit(t: [f64; 3]) -> Result<[f64; 3]> {
    let n = Vector3::from(t).norm();
    if n.is_nan() || n <= 1e-300 {
        return Err(Error::ZeroDirection);
    }
    Ok(t.map(|x| x / n))
}

/// `(⟨J_t⟩, ⟨J_t²⟩, ⟨J_t³⟩)` for a unit vector `t`.
pub fn spin_moments(rho: &CMatrix, spin: Spin, t: [f64; 3]) -> Result<[f64; 3]> {
    check_dim(rho, spin)?;
    let jt = spin_component(&angular_momentum_ops(spin), unit(t)?);
    let jt2 = &jt * &jt;
    let jt3 = &jt2 * &jt;
    Ok([trace_product(rho, &jt).re, trace_product(rho, &jt2).re, trace_product(rho, &jt3).re])
}

/// `2j⟨J_t²⟩ − (2j−1)⟨J_t⟩² − j²`, non-negative for every classical state.
pub fn witness_second_moment(rho: &CMatrix, spin: Spin, t: [f64; 3]) -> Result<WitnessReport> {
    let t = unit(t)?;
    let [m1, m2, _] = spin_moments(rho, spin, t)?;
    let j = spin.j();
    Ok(WitnessReport::new(WitnessKind::SecondMoment, t, 2.0 * j * m2 - (2.0 * j - 1.0) * m1 * m1 - j * j))
}

/// Spin-3/2 third-moment test: the slack
/// `|⟨J_t²⟩ − 3/4| − 2|⟨J_t³⟩ − (7/4)⟨J_t⟩|` is non-negative for classical states.
pub fn witness_third_moment_spin32(rho: &CMatrix, t: [f64; 3]) -> Result<WitnessReport> {
    let t = unit(t)?;
    let [m1, m2, m3] = spin_moments(rho, Spin::THREE_HALVES, t)?;
    let slack = (m2 - 0.75).abs() - 2.0 * (m3 - 1.75 * m1).abs();
    Ok(WitnessReport::new(WitnessKind::ThirdMoment, t, slack))
}

/// The second-moment witness as a quadratic form: its value along a unit
/// `t` is `tᵗ M t` with `M = 2j S − (2j−1) m mᵗ − j² 1`, `S_ab = ⟨{J_a, J_b}⟩/2`,
/// `m_a = ⟨J_a⟩`. For spin 1 this is the matrix `Z`.
pub fn second_moment_form(rho: &CMatrix, spin: Spin) -> Result<Matrix3<f64>> {
    check_dim(rho, spin)?;
    let ops = angular_momentum_ops(spin);
    let j = spin.j();
    let m = Vector3::from_fn(|a, _| trace_product(rho, &ops[a]).re);
    let s = Matrix3::from_fn(|a, b| 0.5 * trace_product(rho, &(&ops[a] * &ops[b] + &ops[b] * &ops[a])).re);
    Ok(s * (2.0 * j) - m * m.transpose() * (2.0 * j - 1.0) - Matrix3::identity() * (j * j))
}

/// Worst cases of the available witnesses over all axes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessScan {
    pub second_moment: WitnessReport,
    /// Only for spin 3/2.
    pub third_moment: Option<WitnessReport>,
}

impl WitnessScan {
    pub fn violated(&self) -> bool {
        self.second_moment.violated() || self.third_moment.is_some_and(|r| r.violated())
    }

    /// The violated report with the lowest value, else the second-moment one.
    pub fn worst(&self) -> WitnessReport {
        match self.third_moment {
            Some(t) if t.violated() && (!self.second_moment.violated() || t.value < self.second_moment.value) => t,
            _ => self.second_moment,
        }
    }
}

/// Minimizes the witnesses over the unit sphere.
///
/// The second-moment minimum is the smallest eigenvalue of
/// [`second_moment_form`]. The spin-3/2 slack is minimized over a Fibonacci
/// grid of `grid_n` axes followed by a Nelder-Mead polish of the best few.
pub fn witness_scan(rho: &CMatrix, spin: Spin, grid_n: usize) -> Result<WitnessScan> {
    let eig = SymmetricEigen::new(second_moment_form(rho, spin)?);
    let i = eig.eigenvalues.imin();
    let t: [f64; 3] = eig.eigenvectors.column(i).into_owned().into();
    let second_moment = WitnessReport::new(WitnessKind::SecondMoment, t, eig.eigenvalues[i]);

    let third_moment = if spin == Spin::THREE_HALVES {
        let slack = |d: Direction| witness_third_moment_spin32(rho, d.unit_vector()).map(|r| r.value);
        let mut scored = Vec::with_capacity(grid_n);
        for d in fibonacci_grid(grid_n.max(1)).points() {
            scored.push((slack(*d)?, *d));
        }
        scored.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = scored[0];
        for &(_, start) in scored.iter().take(4) {
            let polished = nelder_mead(|x| slack(Direction::new(x[0], x[1])).unwrap_or(f64::INFINITY), [start.theta, start.phi], 0.05);
            if polished.1 < best.0 {
                best = (polished.1, Direction::new(polished.0[0], polished.0[1]));
            }
        }
        Some(witness_third_moment_spin32(rho, best.1.unit_vector())?)
    } else {
        None
    };
    Ok(WitnessScan { second_moment, third_moment })
}

/// Two-dimensional Nelder-Mead with the standard coefficients.
fn nelder_mead(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], step: f64) -> ([f64; 2], f64) {
    let mut simplex = [start, [start[0] + step, start[1]], [start[0], start[1] + step]];
    let mut values = simplex.map(&f);
    for _ in 0..300 {
        let mut order = [0, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        if (values[2] - values[0]).abs() < 1e-15 {
            break;
        }
        let c = [(simplex[0][0] + simplex[1][0]) / 2.0, (simplex[0][1] + simplex[1][1]) / 2.0];
        let along = |s: f64| [c[0] + s * (simplex[2][0] - c[0]), c[1] + s * (simplex[2][1] - c[1])];
        let r = along(-1.0);
        let fr = f(r);
        if fr < values[0] {
            let e = along(-2.0);
            let fe = f(e);
            (simplex[2], values[2]) = if fe < fr { (e, fe) } else { (r, fr) };
        } else if fr < values[1] {
            (simplex[2], values[2]) = (r, fr);
        } else {
            let k = if fr < values[2] { along(-0.5) } else { along(0.5) };
            let fk = f(k);
            if fk < values[2].min(fr) {
                (simplex[2], values[2]) = (k, fk);
            } else {
                for i in 1..3 {
                    simplex[i] = [0.5 * (simplex[0][0] + simplex[i][0]), 0.5 * (simplex[0][1] + simplex[i][1])];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let i = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[i], values[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::spin1_is_prep;
    use crate::angular::coherent_ket;
    use crate::linalg::{kron, maximally_mixed, C64};
    use crate::random::{random_classical, random_density, random_sphere_point, rng_from_seed};

    fn basis_state(dim: usize, i: usize) -> CMatrix {
        let mut p = CMatrix::zeros(dim, dim);
        p[(i, i)] = C64::new(1.0, 0.0);
        p
    }

    #[test]
    fn spin_half_is_always_an_equality() {
        let mut rng = rng_from_seed(1);
        for _ in 0..50 {
            let rho = random_density(2, &mut rng);
            let t = random_sphere_point(&mut rng).unit_vector();
            assert!(witness_second_moment(&rho, Spin::HALF, t).unwrap().value.abs() < 1e-14);
        }
    }

    #[test]
    fn spin_one_m0_violates() {
        let r = witness_second_moment(&basis_state(3, 1), Spin::ONE, [0.0, 0.0, 1.0]).unwrap();
        assert!((r.value + 1.0).abs() < 1e-14);
        assert!(r.violated());
    }

    #[test]
    fn coherent_state_is_an_equality_along_its_axis() {
        for tj in 1..6 {
            let spin = Spin::new(tj).unwrap();
            let n = Direction::new(0.9, 0.2);
            let r = witness_second_moment(&coherent_ket(spin, n).projector(), spin, n.unit_vector()).unwrap();
            assert!(r.value.abs() < 1e-12);
            assert!(!r.violated());
        }
    }

    #[test]
    fn quadratic_form_matches_direct_moments() {
        let mut rng = rng_from_seed(2);
        for tj in 1..6 {
            let spin = Spin::new(tj).unwrap();
            let rho = random_density(spin.dim(), &mut rng);
            let m = second_moment_form(&rho, spin).unwrap();
            for _ in 0..10 {
                let t = random_sphere_point(&mut rng).unit_vector();
                let tv = Vector3::from(t);
                let direct = witness_second_moment(&rho, spin, t).unwrap().value;
                assert!((tv.dot(&(m * tv)) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn classical_states_never_violate() {
        let mut rng = rng_from_seed(4);
        for tj in 1..6 {
            let spin = Spin::new(tj).unwrap();
            for n in 1..6 {
                let rho = random_classical(spin, n, &mut rng);
                let scan = witness_scan(&rho, spin, 200).unwrap();
                assert!(!scan.violated(), "{tj} {n} {scan:?}");
            }
        }
    }

    #[test]
    fn spin_one_scan_agrees_with_z_criterion() {
        let mut rng = rng_from_seed(5);
        for i in 0..1000 {
            let rho = if i % 2 == 0 { random_density(3, &mut rng) } else { random_classical(Spin::ONE, 3, &mut rng) };
            let scan = witness_scan(&rho, Spin::ONE, 10).unwrap();
            let (ok, l) = spin1_is_prep(&rho).unwrap();
            assert!((scan.second_moment.value - l).abs() < 1e-10);
            assert_eq!(ok, !scan.violated());
        }
    }

    #[test]
    fn reduced_factor_of_product_state() {
        // ρ_B of |1/2 1/2⟩ ⊗ |1 0⟩
        let rho = kron(&basis_state(2, 0), &basis_state(3, 1));
        let rb = CMatrix::from_fn(3, 3, |i, j| rho[(i, j)] + rho[(3 + i, 3 + j)]);
        let scan = witness_scan(&rb, Spin::ONE, 10).unwrap();
        assert!((scan.second_moment.value + 1.0).abs() < 1e-12);
        assert!(scan.second_moment.direction[2].abs() > 1.0 - 1e-12);
    }

    #[test]
    fn mixed_state_value_is_isotropic() {
        for tj in 1..6 {
            let spin = Spin::new(tj).unwrap();
            let j = spin.j();
            let expected = j * (j + 1.0) * 2.0 * j / 3.0 - j * j;
            let m = second_moment_form(&maximally_mixed(spin.dim()), spin).unwrap();
            assert!((m - Matrix3::identity() * expected).norm() < 1e-12);
            assert!(expected >= 0.0);
        }
    }

    #[test]
    fn third_moment_reference_values() {
        let r = witness_third_moment_spin32(&maximally_mixed(4), [0.3, -0.2, 0.9]).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        let z = [0.0, 0.0, 1.0];
        let up = coherent_ket(Spin::THREE_HALVES, Direction::NORTH).projector();
        assert!(!witness_third_moment_spin32(&up, z).unwrap().violated());
        // |3/2, 1/2⟩: ⟨J_z⟩ = 1/2, ⟨J_z²⟩ = 1/4, ⟨J_z³⟩ = 1/8
        let r = witness_third_moment_spin32(&basis_state(4, 1), z).unwrap();
        assert!((r.value - (0.5 - 2.0 * 0.75)).abs() < 1e-14);
        assert!(r.violated());
        assert!(matches!(witness_third_moment_spin32(&maximally_mixed(3), z), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn third_moment_scan_finds_the_violation() {
        let scan = witness_scan(&basis_state(4, 1), Spin::THREE_HALVES, 300).unwrap();
        let third = scan.third_moment.unwrap();
        assert!(third.value <= -1.0 + 1e-9);
        let mut rng = rng_from_seed(8);
        for n in 1..5 {
            let rho = random_classical(Spin::THREE_HALVES, n, &mut rng);
            assert!(!witness_scan(&rho, Spin::THREE_HALVES, 300).unwrap().violated());
        }
    }
}
