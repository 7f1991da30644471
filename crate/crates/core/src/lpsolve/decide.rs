use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::constraints::{build_constraints, Mode};
use super::{fibonacci_grid, ring, simplex_solve_with, LpStandardForm, LpStatus, SimplexOptions};
use crate::angular::Spin;
use crate::density::{p_coeffs_from_rho, to_multipole, Atom, DeltaMixture};
use crate::linalg::CMatrix;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecideOptions {
    /// Size of the initial Fibonacci grid.
    pub grid_n: usize,
    /// Largest Hilbert-Schmidt reconstruction error accepted as a certificate.
    pub tolerance: f64,
    /// Local refinement rounds; each adds a ring of points around every
    /// support point, at half the previous radius.
    pub refine_rounds: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self { grid_n: 1000, tolerance: 1e-6, refine_rounds: 20 }
    }
}

/// Outcome of a grid membership test. `prep == false` is not a proof of
/// non-classicality: the grid may simply be too coarse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub prep: bool,
    /// Best non-negative mixture found; a certificate when `prep` holds.
    pub mixture: DeltaMixture,
    /// Hilbert-Schmidt distance between `mixture` and the state.
    pub residual: f64,
    pub grid_size: usize,
    pub rounds: usize,
}

/// Searches for a non-negative mixture of coherent states on a Fibonacci grid
/// reproducing `rho`.
///
/// The program minimizes the ℓ1 violation of the decide-mode constraints, so
/// it is always feasible and the best mixture is available even when the
/// state is not reproduced. Refinement rounds then add points near the
/// current support and re-solve from the previous basis.
pub fn decide_prep(rho: &CMatrix, spin: Spin, options: &DecideOptions) -> Result<Decision> {
    let target = p_coeffs_from_rho(&to_multipole(rho, spin)?);
    let mut grid = fibonacci_grid(options.grid_n.max(1));
    let mut radius = (4.0 * std::f64::consts::PI / grid.len() as f64).sqrt() / 2.0;
    let mut basis: Option<Vec<usize>> = None;
    let mut rounds = 0;
    loop {
        let prog = build_constraints(&target, &grid, Mode::Decide)?;
        let (lp, slacks) = with_residual_slacks(&prog.lp)?;
        let start = basis.take().unwrap_or_else(|| slack_basis(&prog.lp.b));
        let sol = simplex_solve_with(&lp, &SimplexOptions::default(), Some(&start))?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Lp(format!("residual program ended {:?}", sol.status)));
        }
        let atoms: Vec<Atom> = (0..grid.len())
            .filter(|&i| sol.w[slacks + i] > 0.0)
            .map(|i| Atom { weight: sol.w[slacks + i], direction: grid.points()[i] })
            .collect();
        let mixture = DeltaMixture::new(atoms)?;
        let residual = mixture.residual(spin, rho);
        if residual <= options.tolerance || rounds >= options.refine_rounds {
            return Ok(Decision {
                prep: residual <= options.tolerance,
                mixture,
                residual,
                grid_size: grid.len(),
                rounds,
            });
        }
        for a in &mixture.atoms {
            grid.extend(&ring(a.direction, radius, 6));
        }
        radius /= 2.0;
        rounds += 1;
        if sol.basis.len() == lp.rows() {
            basis = Some(sol.basis);
        }
    }
}

/// `[I | −I | A]` with unit cost on the slack columns. Returns the program
/// and the number of slack columns.
pub(crate) fn with_residual_slacks(lp: &LpStandardForm) -> Result<(LpStandardForm, usize)> {
    let (m, n) = (lp.rows(), lp.cols());
    let mut a = DMatrix::zeros(m, 2 * m + n);
    a.view_mut((0, 0), (m, m)).fill_diagonal(1.0);
    a.view_mut((0, m), (m, m)).fill_diagonal(-1.0);
    a.view_mut((0, 2 * m), (m, n)).copy_from(&lp.a);
    let c = DVector::from_fn(2 * m + n, |j, _| if j < 2 * m { 1.0 } else { 0.0 });
    Ok((LpStandardForm::new(c, a, lp.b.clone())?, 2 * m))
}

fn slack_basis(b: &DVector<f64>) -> Vec<usize> {
    let m = b.len();
    (0..m).map(|i| if b[i] >= 0.0 { i } else { m + i }).collect()
}
