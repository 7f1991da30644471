use nalgebra::{DMatrix, DVector};

use super::{LpStandardForm, SphereGrid};
use crate::angular::{lm_count, real_harmonics, Spin};
use crate::density::PCoeffs;
use crate::{Error, Result};

/// Which program [`build_constraints`] produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Feasibility of `Σ w_i Y(α_i) = P` for `K > 0` together with `Σ w_i = 1`.
    Decide,
    /// `min Σ w_i` subject to the `K > 0` rows only.
    Boundary,
}

/// A δ-peak program together with the `(K, Q)` label of every row; the
/// normalization row of decide mode is labelled `(0, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaProgram {
    pub lp: LpStandardForm,
    pub labels: Vec<(usize, i64)>,
    pub mode: Mode,
}

/// Real spherical harmonics with `1 ≤ K ≤ k_max` at each point, one column per point.
pub fn harmonic_columns(k_max: usize, points: &SphereGrid) -> DMatrix<f64> {
    let rows = lm_count(k_max) - 1;
    let mut a = DMatrix::zeros(rows, points.len());
    for (i, p) in points.points().iter().enumerate() {
        let y = real_harmonics(k_max, *p);
        a.column_mut(i).copy_from_slice(&y[1..]);
    }
    a
}

pub(crate) fn harmonic_labels(k_max: usize) -> Vec<(usize, i64)> {
    (1..=k_max).flat_map(|k| (-(k as i64)..=k as i64).map(move |q| (k, q))).collect()
}

/// Column `i` holds the real harmonics at `α_i`; row `(K, Q)` requires
/// `Σ_i w_i Y_KQ(α_i) = P_KQ` in the real basis. Since
/// `tr(|α⟩⟨α| T_KQ) = c_K Y_KQ(α)` for the real multipoles, a solution is a
/// mixture reproducing every `K > 0` moment of the target.
pub fn build_constraints(target: &PCoeffs, grid: &SphereGrid, mode: Mode) -> Result<DeltaProgram> {
    let k_max = target.spin.k_max();
    if target.values.len() != lm_count(k_max) {
        return Err(Error::Lp(format!("expected {} coefficients, found {}", lm_count(k_max), target.values.len())));
    }
    let real = target.real_values();
    let a = harmonic_columns(k_max, grid);
    let mut labels = harmonic_labels(k_max);
    let n = grid.len();
    let lp = match mode {
        Mode::Boundary => LpStandardForm::new(DVector::from_element(n, 1.0), a, DVector::from_column_slice(&real[1..]))?,
        Mode::Decide => {
            let m = a.nrows();
            let a = a.insert_row(m, 1.0);
            let b = DVector::from_iterator(m + 1, real[1..].iter().copied().chain([1.0]));
            labels.push((0, 0));
            LpStandardForm::new(DVector::zeros(n), a, b)?
        }
    };
    Ok(DeltaProgram { lp, labels, mode })
}

/// Number of `K > 0` constraint rows for a spin: `(2j+1)² − 1`.
pub fn boundary_rows(spin: Spin) -> usize {
    spin.dim() * spin.dim() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{p_coeffs_from_rho, to_multipole, DeltaMixture};
    use crate::linalg::maximally_mixed;
    use crate::lpsolve::fibonacci_grid;
    use crate::random::{random_mixture, rng_from_seed};

    fn p_of(rho: &crate::linalg::CMatrix, spin: Spin) -> PCoeffs {
        p_coeffs_from_rho(&to_multipole(rho, spin).unwrap())
    }

    #[test]
    fn row_counts() {
        let g = fibonacci_grid(30);
        let p = p_of(&maximally_mixed(3), Spin::ONE);
        assert_eq!(build_constraints(&p, &g, Mode::Boundary).unwrap().lp.rows(), 8);
        assert_eq!(build_constraints(&p, &g, Mode::Decide).unwrap().lp.rows(), 9);
        assert_eq!(boundary_rows(Spin::ONE), 8);
        let b = build_constraints(&p, &g, Mode::Boundary).unwrap();
        assert!(b.lp.b.amax() < 1e-15);
    }

    #[test]
    fn mixture_weights_solve_the_rows() {
        for tj in 1..5 {
            let spin = Spin::new(tj).unwrap();
            let grid = fibonacci_grid(40);
            let weights: Vec<f64> = (0..40).map(|i| if i % 3 == 0 { 0.1 + i as f64 } else { 0.0 }).collect();
            let total: f64 = weights.iter().sum();
            let mix = DeltaMixture::from_pairs(weights.iter().map(|w| w / total).zip(grid.points().iter().copied())).unwrap();
            let prog = build_constraints(&p_of(&mix.matrix(spin), spin), &grid, Mode::Decide).unwrap();
            let w = DVector::from_iterator(40, mix.atoms.iter().map(|a| a.weight));
            assert!(prog.lp.residual(&w) < 1e-12);
        }
    }

    #[test]
    fn permuting_the_grid_permutes_columns() {
        let grid = fibonacci_grid(12);
        let mut pts = grid.points().to_vec();
        pts.swap(2, 7);
        let swapped = SphereGrid::new(pts);
        let p = p_of(&random_mixture(3, &mut rng_from_seed(1)).matrix(Spin::ONE), Spin::ONE);
        let a = build_constraints(&p, &grid, Mode::Boundary).unwrap().lp;
        let s = build_constraints(&p, &swapped, Mode::Boundary).unwrap().lp;
        assert_eq!(a.b, s.b);
        assert_eq!(a.a.column(2), s.a.column(7));
        assert_eq!(a.a.column(7), s.a.column(2));
    }
}
