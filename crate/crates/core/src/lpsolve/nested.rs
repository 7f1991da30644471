use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{simplex_solve_with, LpSolution, LpStandardForm, LpStatus, SimplexOptions};
use crate::{Error, Result};

/// One grid level of a boundary search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryStep {
    /// Columns (points or point pairs) in the program at this level.
    pub grid_size: usize,
    /// Optimal `Σ w`; `+∞` when the level was infeasible.
    pub inverse_kappa: f64,
    pub kappa: f64,
    pub iterations: usize,
}

pub(crate) struct NestedOutcome {
    pub history: Vec<BoundaryStep>,
    pub solution: LpSolution,
    pub columns: usize,
    pub converged: bool,
}

/// Minimizes `Σ w` subject to `A w = b`, `w ≥ 0` over a growing column set.
///
/// `next(level)` yields the columns added at each level, or `None` to stop.
/// Each level is warm-started from the previous optimal basis, which stays
/// valid because old columns keep their indices. Stops once two consecutive
/// optimal values agree to `tolerance` (relative).
pub(crate) fn nested_min_weight(
    b: &DVector<f64>,
    mut next: impl FnMut(usize) -> Option<DMatrix<f64>>,
    tolerance: f64,
) -> Result<NestedOutcome> {
    let m = b.len();
    let opts = SimplexOptions::default();
    let mut a = DMatrix::<f64>::zeros(m, 0);
    let mut history = Vec::new();
    let mut best: Option<LpSolution> = None;
    let mut basis: Option<Vec<usize>> = None;
    let mut converged = false;
    let mut level = 0;
    while let Some(cols) = next(level) {
        level += 1;
        if cols.nrows() != m {
            return Err(Error::Lp(format!("column block has {} rows, expected {m}", cols.nrows())));
        }
        let n0 = a.ncols();
        a = a.resize_horizontally(n0 + cols.ncols(), 0.0);
        a.columns_mut(n0, cols.ncols()).copy_from(&cols);
        let lp = LpStandardForm::new(DVector::from_element(a.ncols(), 1.0), a.clone(), b.clone())?;
        let sol = simplex_solve_with(&lp, &opts, basis.as_deref())?;
        match sol.status {
            LpStatus::Optimal => {
                let value = sol.objective;
                history.push(BoundaryStep {
                    grid_size: a.ncols(),
                    inverse_kappa: value,
                    kappa: 1.0 / value,
                    iterations: sol.iterations,
                });
                if let Some(prev) = &best {
                    let diff = (prev.objective - value).abs();
                    if diff <= tolerance * value.abs() || value.abs() < 1e-300 && diff < 1e-300 {
                        converged = true;
                    }
                }
                if sol.basis.len() == m {
                    basis = Some(sol.basis.clone());
                }
                best = Some(sol);
                if converged {
                    break;
                }
            }
            LpStatus::Infeasible => history.push(BoundaryStep {
                grid_size: a.ncols(),
                inverse_kappa: f64::INFINITY,
                kappa: 0.0,
                iterations: sol.iterations,
            }),
            LpStatus::Unbounded => return Err(Error::Lp("minimum-weight program unbounded".into())),
        }
    }
    let solution = best.ok_or_else(|| Error::Lp("infeasible at every grid size".into()))?;
    Ok(NestedOutcome { history, solution, columns: a.ncols(), converged })
}
