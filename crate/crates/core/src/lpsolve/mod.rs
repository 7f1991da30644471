//! δ-peak linear programs: sphere grids, simplex, membership and boundary search.

mod boundary;
mod constraints;
mod decide;
mod grid;
mod nested;
mod simplex;

pub use boundary::{
    boundary_kappa, concavity_check, concavity_slack, doubling_schedule, BoundaryOptions, BoundaryResult,
};
pub use constraints::{boundary_rows, build_constraints, harmonic_columns, DeltaProgram, Mode};
pub use decide::{decide_prep, Decision, DecideOptions};
pub(crate) use decide::with_residual_slacks;
pub use grid::{fibonacci_grid, ring, SphereGrid};
pub use nested::BoundaryStep;
pub(crate) use nested::nested_min_weight;
pub use simplex::{simplex_solve, simplex_solve_with, LpSolution, LpStandardForm, LpStatus, SimplexOptions};
