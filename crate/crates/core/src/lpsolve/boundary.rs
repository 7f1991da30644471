use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::constraints::harmonic_columns;
use super::nested::{nested_min_weight, BoundaryStep};
use super::{fibonacci_grid, SphereGrid};
use crate::angular::Spin;
use crate::density::{real_p_coefficients, Atom, DeltaMixture, ScaledFamily};
use crate::linalg::{hs_norm, CMatrix};
use crate::{Error, Result};

/// Grid schedule and stopping rule for [`boundary_kappa`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryOptions {
    /// Fibonacci grid sizes; level `i` adds the points of `fibonacci_grid(schedule[i])`.
    pub schedule: Vec<usize>,
    /// Stop once consecutive `1/κ` estimates agree to this relative tolerance.
    pub tolerance: f64,
    /// Add the mirror image `(θ, −φ)` of every grid point.
    pub mirror_closed: bool,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        Self { schedule: doubling_schedule(250, 6), tolerance: 1e-4, mirror_closed: false }
    }
}

/// `n0, 2n0, 4n0, …` with `levels` entries.
pub fn doubling_schedule(n0: usize, levels: usize) -> Vec<usize> {
    (0..levels).map(|i| n0 << i).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResult<M = DeltaMixture> {
    /// Grid estimate of `κ_e`; a lower bound on the exact value.
    pub kappa_e: f64,
    /// Certificate for `ρ0 + κ_e ρ̂`, weights summing to one.
    pub mixture: M,
    /// Number of columns in the final program.
    pub grid_size: usize,
    pub history: Vec<BoundaryStep>,
    pub converged: bool,
    /// Hilbert-Schmidt distance between the certificate and `ρ0 + κ_e ρ̂`.
    pub residual: f64,
}

/// Boundary of the classical set along `family`: the largest `κ` for which
/// `ρ0 + κ ρ̂` is a mixture of coherent states on the grid.
///
/// Writing the mixture as `κ v`, the `K > 0` moments require
/// `Σ v_i Y(α_i) = P(ρ̂)` and the trace requires `κ Σ v_i = 1`, so
/// `1/κ_e = min Σ v`.
pub fn boundary_kappa(family: &ScaledFamily, spin: Spin, options: &BoundaryOptions) -> Result<BoundaryResult> {
    if family.dim() != spin.dim() {
        return Err(Error::DimensionMismatch { expected: spin.dim(), found: family.dim() });
    }
    let target = real_p_coefficients(family.direction(), spin)?;
    let b = DVector::from_column_slice(&target[1..]);
    let k_max = spin.k_max();
    let mut grid = SphereGrid::default();
    let outcome = nested_min_weight(
        &b,
        |level| {
            let n = *options.schedule.get(level)?;
            let mut new = fibonacci_grid(n);
            if options.mirror_closed {
                new = new.mirror_closed();
            }
            grid.extend(&new);
            Some(harmonic_columns(k_max, &new))
        },
        options.tolerance,
    )?;
    let value = outcome.solution.objective;
    let kappa_e = 1.0 / value;
    let atoms = outcome
        .solution
        .support(0.0)
        .into_iter()
        .map(|i| Atom { weight: outcome.solution.w[i] / value, direction: grid.points()[i] })
        .collect();
    let mixture = DeltaMixture::new(atoms)?;
    let residual = if kappa_e.is_finite() { mixture.residual(spin, &family.state_matrix(kappa_e)) } else { f64::NAN };
    Ok(BoundaryResult {
        kappa_e,
        mixture,
        grid_size: outcome.columns,
        history: outcome.history,
        converged: outcome.converged,
        residual,
    })
}

/// `c/κ(ρ̂₁) + (1−c)/κ(ρ̂₂) − 1/κ(cρ̂₁ + (1−c)ρ̂₂)` for unnormalized directions.
///
/// `1/κ_e` is a gauge (positively homogeneous and convex) on traceless
/// matrices, so the slack is non-negative up to the accuracy of `kappa`.
pub fn concavity_slack(
    dir1: &CMatrix,
    dir2: &CMatrix,
    c: f64,
    kappa: impl Fn(&ScaledFamily) -> Result<f64>,
) -> Result<f64> {
    let mixed = dir1.scale(c) + dir2.scale(1.0 - c);
    let inv = |m: &CMatrix| -> Result<f64> {
        if hs_norm(m) < 1e-14 {
            return Ok(0.0);
        }
        Ok(1.0 / kappa(&ScaledFamily::unnormalized(m.clone())?)?)
    };
    Ok(c * inv(dir1)? + (1.0 - c) * inv(dir2)? - inv(&mixed)?)
}

/// [`concavity_slack`] with grid estimates of `κ_e`.
pub fn concavity_check(
    spin: Spin,
    dir1: &CMatrix,
    dir2: &CMatrix,
    c: f64,
    options: &BoundaryOptions,
) -> Result<f64> {
    concavity_slack(dir1, dir2, c, |f| boundary_kappa(f, spin, options).map(|r| r.kappa_e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::spin1_kappa_e;
    use crate::angular::{coherent_ket, Direction};
    use crate::density::{psd_check, Norm};
    use crate::linalg::C64;
    use crate::random::{random_direction, rng_from_seed};

    fn m0() -> CMatrix {
        let mut p = CMatrix::zeros(3, 3);
        p[(1, 1)] = C64::new(1.0, 0.0);
        p
    }

    #[test]
    fn spin_one_m0_direction() {
        let f = ScaledFamily::toward(&m0(), Norm::Trace).unwrap();
        let r = boundary_kappa(&f, Spin::ONE, &BoundaryOptions::default()).unwrap();
        assert!((r.kappa_e - 1.0 / 3.0).abs() < 1e-2 / 3.0, "{}", r.kappa_e);
        assert!(r.kappa_e <= 1.0 / 3.0 + 1e-9);
        assert!(r.residual < 1e-8);
        assert!(r.mixture.len() <= 8);
        assert!((r.mixture.total_weight() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn history_is_monotone() {
        let mut rng = rng_from_seed(12);
        let f = ScaledFamily::new(random_direction(3, &mut rng), Norm::Trace).unwrap();
        let opts = BoundaryOptions { schedule: doubling_schedule(50, 5), tolerance: 0.0, mirror_closed: false };
        let r = boundary_kappa(&f, Spin::ONE, &opts).unwrap();
        assert_eq!(r.history.len(), 5);
        for pair in r.history.windows(2) {
            assert!(pair[1].inverse_kappa <= pair[0].inverse_kappa + 1e-10);
        }
        assert!(!r.converged);
        let exact = spin1_kappa_e(&f).unwrap();
        assert!(r.kappa_e <= exact * (1.0 + 1e-9));
        assert!((r.kappa_e - exact).abs() < 0.01 * exact);
    }

    #[test]
    fn spin_half_reaches_positivity() {
        let mut rng = rng_from_seed(13);
        let opts = BoundaryOptions { schedule: doubling_schedule(100, 3), ..Default::default() };
        for _ in 0..5 {
            let f = ScaledFamily::new(random_direction(2, &mut rng), Norm::Trace).unwrap();
            let r = boundary_kappa(&f, Spin::HALF, &opts).unwrap();
            assert!((r.kappa_e - f.positivity_kappa()).abs() < 0.01 * f.positivity_kappa());
            assert!(psd_check(&f.state_matrix(r.kappa_e)).unwrap().1);
        }
    }

    #[test]
    fn coherent_direction_touches_positivity() {
        let p = coherent_ket(Spin::ONE, Direction::new(0.3, 0.4)).projector();
        let f = ScaledFamily::toward(&p, Norm::Trace).unwrap();
        let r = boundary_kappa(&f, Spin::ONE, &BoundaryOptions::default()).unwrap();
        assert!((r.kappa_e - 4.0 / 3.0).abs() < 0.01 * 4.0 / 3.0, "{}", r.kappa_e);
    }

    #[test]
    fn concavity_slack_cases() {
        let f = |fam: &ScaledFamily| spin1_kappa_e(fam);
        let mut rng = rng_from_seed(14);
        let d = random_direction(3, &mut rng);
        assert!(concavity_slack(&d, &d, 0.5, f).unwrap().abs() < 1e-10);
        // orthogonal diagonal directions
        let d1 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)]));
        let d2 = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(-2.0, 0.0)]));
        assert!(concavity_slack(&d1, &d2, 0.5, f).unwrap() > 1e-3);
    }
}
