use nalgebra::{DMatrix, Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::angular::{angular_momentum_ops, Direction, Spin};
use crate::density::{DeltaMixture, ScaledFamily};
use crate::linalg::{ensure_square, maximally_mixed, trace_product, CMatrix};
use crate::{Error, Result};

/// Eigenvalues of `Z` above `−SPIN1_TOLERANCE` count as non-negative.
pub const SPIN1_TOLERANCE: f64 = 1e-10;

/// First and second moments of a spin-1 state: `u_a = ⟨J_a⟩`,
/// `W_ab = ⟨J_aJ_b + J_bJ_a⟩ − δ_ab` and `Z = W − u uᵗ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinOneFrame {
    pub u: Vector3<f64>,
    pub w: Matrix3<f64>,
    pub z: Matrix3<f64>,
}

impl SpinOneFrame {
    pub fn z_min_eigenvalue(&self) -> f64 {
        self.z.symmetric_eigenvalues().min()
    }
}

fn require_spin_one(rho: &CMatrix) -> Result<()> {
    let d = ensure_square(rho)?;
    if d != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: d });
    }
    Ok(())
}

pub fn spin1_frame(rho: &CMatrix) -> Result<SpinOneFrame> {
    require_spin_one(rho)?;
    let ops = angular_momentum_ops(Spin::ONE);
    let u = Vector3::from_fn(|a, _| trace_product(rho, &ops[a]).re);
    let w = Matrix3::from_fn(|a, b| {
        let anti = &ops[a] * &ops[b] + &ops[b] * &ops[a];
        trace_product(rho, &anti).re - if a == b { 1.0 } else { 0.0 }
    });
    Ok(SpinOneFrame { u, w, z: w - u * u.transpose() })
}

/// Classical iff `Z ⪰ 0`. Returns the verdict and `λ_min(Z)`.
pub fn spin1_is_prep(rho: &CMatrix) -> Result<(bool, f64)> {
    let l = spin1_frame(rho)?.z_min_eigenvalue();
    Ok((l >= -SPIN1_TOLERANCE, l))
}

/// Eight-point certificate for a classical spin-1 state.
///
/// With `Z = A Aᵗ` and `AᵗA` diagonal, every sign vector `t ∈ {±1}³` gives
/// `|A t|² = tr Z = 1 − |u|²`, so the point `u + τ A t` on the ray is on the
/// unit sphere for the positive root `τ`.
pub fn spin1_decompose(rho: &CMatrix) -> Result<DeltaMixture> {
    let frame = spin1_frame(rho)?;
    let eig = SymmetricEigen::new(frame.z);
    let lmin = eig.eigenvalues.min();
    if lmin < -SPIN1_TOLERANCE {
        return Err(Error::NotClassical(lmin));
    }
    let u = frame.u;
    let gap = 1.0 - u.norm_squared();
    if gap < 1e-9 {
        return Ok(DeltaMixture::single(Direction::from_vector(u.into())));
    }
    let roots = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
    let a = eig.eigenvectors * Matrix3::from_diagonal(&roots);
    let mut pairs = Vec::with_capacity(8);
    for bits in 0..8u8 {
        let t = Vector3::from_fn(|i, _| if bits >> i & 1 == 0 { 1.0 } else { -1.0 });
        let at = a * t;
        let c = u.dot(&at) / gap;
        let tau = if c > 0.0 { 1.0 / (c + (1.0 + c * c).sqrt()) } else { -c + (1.0 + c * c).sqrt() };
        let n = u + at * tau;
        pairs.push((0.25 / (1.0 + tau * tau), Direction::from_vector(n.into())));
    }
    DeltaMixture::from_pairs(pairs)
}

fn z_kappa(frame: &SpinOneFrame, kappa: f64) -> Matrix3<f64> {
    frame.w * kappa + Matrix3::identity() * ((1.0 - kappa) / 3.0) - frame.u * frame.u.transpose() * (kappa * kappa)
}

/// Boundary of the classical set along a spin-1 family: the smallest `κ > 0`
/// with `det Z_κ = 0`, where `Z_κ = κW + (1−κ)/3·1 − κ² u uᵗ` and `u, W` are
/// the moments of `ρ0 + ρ̂`. `+∞` if no positive root exists.
///
/// `det Z_κ` is a polynomial of degree at most four; its roots seed a
/// bisection on `λ_min(Z_κ)`, which is concave in `κ`.
pub fn spin1_kappa_e(family: &ScaledFamily) -> Result<f64> {
    require_spin_one(family.direction())?;
    let frame = spin1_frame(&(maximally_mixed(3) + family.direction()))?;
    let lmin = |k: f64| z_kappa(&frame, k).symmetric_eigenvalues().min();

    // det Z_κ through its values at κ = 0..4
    let nodes: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 4.0];
    let vander = DMatrix::from_fn(5, 5, |i, p| nodes[i].powi(p as i32));
    let values = nalgebra::DVector::from_iterator(5, nodes.iter().map(|&k| z_kappa(&frame, k).determinant()));
    let coeffs = vander.lu().solve(&values).ok_or_else(|| Error::Lp("singular interpolation".into()))?;

    let Some(guess) = smallest_positive_root(coeffs.as_slice()) else {
        return Ok(f64::INFINITY);
    };
    // bracket [lo, hi] with λ_min(lo) > 0 ≥ λ_min(hi)
    let mut lo = 0.0;
    let probe = guess * (1.0 - 1e-6);
    if lmin(probe) > 0.0 {
        lo = probe;
    }
    let mut step = guess * 1e-6 + 1e-12;
    let mut hi = guess + step;
    while lmin(hi) > 0.0 {
        lo = hi;
        step *= 2.0;
        hi += step;
        if hi > 1e12 {
            return Ok(f64::INFINITY);
        }
    }
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if lmin(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Smallest positive real root of `Σ c_p x^p` from the companion matrix.
fn smallest_positive_root(coeffs: &[f64]) -> Option<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let deg = coeffs.iter().rposition(|c| c.abs() > 1e-13 * scale)?;
    if deg == 0 {
        return None;
    }
    let lead = coeffs[deg];
    let mut companion = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i] / lead;
    }
    companion
        .complex_eigenvalues()
        .iter()
        .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()) && z.re > 1e-12)
        .map(|z| z.re)
        .min_by(f64::total_cmp)
}
