//! Dense two-phase revised simplex for `min cᵗw` subject to `A w = b`, `w ≥ 0`.
//!
//! The basis inverse is kept explicitly and updated by rank-one eliminations,
//! with a fresh inverse every [`SimplexOptions::refactor_interval`] pivots.
//! Pricing is Dantzig's rule; after a long run of degenerate pivots the solver
//! falls back to Bland's rule until the objective moves again.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LpStandardForm {
    pub c: DVector<f64>,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

impl LpStandardForm {
    pub fn new(c: DVector<f64>, a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        if a.nrows() != b.len() || a.ncols() != c.len() {
            return Err(Error::Lp(format!(
                "shape mismatch: A is {}x{}, b has {}, c has {}",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        if !(a.iter().chain(b.iter()).chain(c.iter()).all(|x| x.is_finite())) {
            return Err(Error::Lp("non-finite entry".into()));
        }
        Ok(Self { c, a, b })
    }

    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    /// `‖A w − b‖∞`
    pub fn residual(&self, w: &DVector<f64>) -> f64 {
        (&self.a * w - &self.b).amax()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub w: DVector<f64>,
    pub objective: f64,
    /// Structural columns in the final basis.
    pub basis: Vec<usize>,
    pub iterations: usize,
    /// Phase-one optimum: the remaining artificial mass.
    pub infeasibility: f64,
}

impl LpSolution {
    /// Indices with `w_i > tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.w.len()).filter(|&i| self.w[i] > tol).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimplexOptions {
    /// Smallest admissible pivot element in the ratio test.
    pub pivot_tolerance: f64,
    /// Reduced costs above `−optimality_tolerance` are treated as non-negative.
    pub optimality_tolerance: f64,
    /// Phase-one optimum (relative to `1 + ‖b‖∞`) above which the system is infeasible.
    pub feasibility_tolerance: f64,
    pub refactor_interval: usize,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            pivot_tolerance: 1e-10,
            optimality_tolerance: 1e-9,
            feasibility_tolerance: 1e-9,
            refactor_interval: 40,
            max_iterations: 200_000,
        }
    }
}

pub fn simplex_solve(lp: &LpStandardForm) -> Result<LpSolution> {
    simplex_solve_with(lp, &SimplexOptions::default(), None)
}

/// Solves `lp`, starting from `warm_basis` (structural column indices, one
/// per row) when that basis is nonsingular and primal feasible.
pub fn simplex_solve_with(
    lp: &LpStandardForm,
    options: &SimplexOptions,
    warm_basis: Option<&[usize]>,
) -> Result<LpSolution> {
    let mut s = Solver::new(lp, *options);
    let warm = match warm_basis {
        Some(basis) => s.try_warm_start(basis)?,
        None => false,
    };
    if !warm {
        s.cold_start()?;
        let phase_one = DVector::from_fn(s.n + s.m, |j, _| if j < s.n { 0.0 } else { 1.0 });
        s.run(&phase_one)?;
        let infeasibility = s.artificial_mass();
        if infeasibility > options.feasibility_tolerance * (1.0 + lp.b.amax()) {
            return Ok(s.finish(LpStatus::Infeasible, infeasibility));
        }
        s.drive_out_artificials()?;
    }
    let phase_two = DVector::from_fn(s.n + s.m, |j, _| if j < s.n { lp.c[j] } else { 0.0 });
    let status = if s.run(&phase_two)? { LpStatus::Optimal } else { LpStatus::Unbounded };
    s.refactor()?;
    let infeasibility = s.artificial_mass();
    Ok(s.finish(status, infeasibility))
}

struct Solver<'a> {
    lp: &'a LpStandardForm,
    opts: SimplexOptions,
    m: usize,
    n: usize,
    /// Column in each basis position; `j ≥ n` is the artificial of row `j − n`.
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: DMatrix<f64>,
    x: DVector<f64>,
    sign: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
}

impl<'a> Solver<'a> {
    fn new(lp: &'a LpStandardForm, opts: SimplexOptions) -> Self {
        let (m, n) = (lp.rows(), lp.cols());
        Self {
            lp,
            opts,
            m,
            n,
            basis: Vec::new(),
            is_basic: vec![false; n + m],
            binv: DMatrix::identity(m, m),
            x: DVector::zeros(m),
            sign: lp.b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect(),
            iterations: 0,
            since_refactor: 0,
        }
    }

    fn column(&self, j: usize) -> DVector<f64> {
        if j < self.n {
            self.lp.a.column(j).into_owned()
        } else {
            let mut e = DVector::zeros(self.m);
            e[j - self.n] = self.sign[j - self.n];
            e
        }
    }

    fn set_basis(&mut self, basis: Vec<usize>) {
        self.is_basic.iter_mut().for_each(|b| *b = false);
        for &j in &basis {
            self.is_basic[j] = true;
        }
        self.basis = basis;
    }

    fn cold_start(&mut self) -> Result<()> {
        self.set_basis((self.n..self.n + self.m).collect());
        self.refactor()
    }

    fn try_warm_start(&mut self, basis: &[usize]) -> Result<bool> {
        let mut seen = vec![false; self.n];
        if basis.len() != self.m || basis.iter().any(|&j| j >= self.n || std::mem::replace(&mut seen[j], true)) {
            return Ok(false);
        }
        self.set_basis(basis.to_vec());
        if self.refactor().is_err() {
            return Ok(false);
        }
        let tol = self.opts.feasibility_tolerance * (1.0 + self.lp.b.amax());
        if self.x.iter().any(|&v| v < -tol) {
            return Ok(false);
        }
        self.x.iter_mut().for_each(|v| *v = v.max(0.0));
        Ok(true)
    }

    fn refactor(&mut self) -> Result<()> {
        let mut b = DMatrix::zeros(self.m, self.m);
        for (r, &j) in self.basis.iter().enumerate() {
            b.set_column(r, &self.column(j));
        }
        self.binv = b.lu().try_inverse().ok_or_else(|| Error::Lp("singular basis".into()))?;
        self.x = &self.binv * &self.lp.b;
        self.since_refactor = 0;
        Ok(())
    }

    fn artificial_mass(&self) -> f64 {
        self.basis.iter().zip(self.x.iter()).filter(|(&j, _)| j >= self.n).map(|(_, &v)| v.abs()).sum()
    }

    /// Iterates to optimality for `cost`. Returns `false` when unbounded.
    fn run(&mut self, cost: &DVector<f64>) -> Result<bool> {
        let stall_limit = 5 * self.m.max(1);
        let mut degenerate = 0;
        let mut bland = false;
        loop {
            if self.iterations >= self.opts.max_iterations {
                return Err(Error::Lp(format!("iteration limit {} reached", self.opts.max_iterations)));
            }
            let cb = DVector::from_iterator(self.m, self.basis.iter().map(|&j| cost[j]));
            let y = self.binv.tr_mul(&cb);
            let reduced = self.lp.a.tr_mul(&y);
            let tol = self.opts.optimality_tolerance;
            let mut entering = None;
            let mut best = -tol;
            for j in 0..self.n {
                if self.is_basic[j] {
                    continue;
                }
                let d = cost[j] - reduced[j];
                if bland {
                    if d < -tol {
                        entering = Some(j);
                        break;
                    }
                } else if d < best {
                    best = d;
                    entering = Some(j);
                }
            }
            let Some(q) = entering else { return Ok(true) };

            let dir = &self.binv * self.column(q);
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                if dir[i] <= self.opts.pivot_tolerance {
                    continue;
                }
                let ratio = self.x[i].max(0.0) / dir[i];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((r, best_ratio)) => {
                        let tie = (ratio - best_ratio).abs() <= 1e-12 * (1.0 + best_ratio);
                        let better_tie = if bland { self.basis[i] < self.basis[r] } else { dir[i] > dir[r] };
                        if ratio < best_ratio && !tie || tie && better_tie {
                            Some((i, ratio))
                        } else {
                            Some((r, best_ratio))
                        }
                    }
                };
            }
            let Some((r, theta)) = leave else { return Ok(false) };

            self.pivot(q, r, &dir, theta)?;
            if theta <= 1e-12 {
                degenerate += 1;
                if degenerate > stall_limit {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }
        }
    }

    fn pivot(&mut self, q: usize, r: usize, dir: &DVector<f64>, theta: f64) -> Result<()> {
        self.x.axpy(-theta, dir, 1.0);
        self.x[r] = theta;
        let p = dir[r];
        let pivot_row = self.binv.row(r).transpose() / p;
        let mut others = dir.clone();
        others[r] = 0.0;
        self.binv.ger(-1.0, &others, &pivot_row, 1.0);
        self.binv.set_row(r, &pivot_row.transpose());
        self.is_basic[self.basis[r]] = false;
        self.is_basic[q] = true;
        self.basis[r] = q;
        self.iterations += 1;
        self.since_refactor += 1;
        if self.since_refactor >= self.opts.refactor_interval {
            self.refactor()?;
        }
        Ok(())
    }

    /// Replaces basic artificials (at zero level) by structural columns where
    /// possible; rows with no eligible column are redundant and keep theirs.
    fn drive_out_artificials(&mut self) -> Result<()> {
        for r in 0..self.m {
            if self.basis[r] < self.n {
                continue;
            }
            let row = self.lp.a.tr_mul(&self.binv.row(r).transpose());
            let candidate = (0..self.n)
                .filter(|&j| !self.is_basic[j])
                .max_by(|&a, &b| row[a].abs().total_cmp(&row[b].abs()));
            if let Some(q) = candidate.filter(|&q| row[q].abs() > 1e-7) {
                let dir = &self.binv * self.column(q);
                let theta = self.x[r] / dir[r];
                self.pivot(q, r, &dir, theta)?;
            }
        }
        Ok(())
    }

    fn finish(&self, status: LpStatus, infeasibility: f64) -> LpSolution {
        let mut w = DVector::zeros(self.n);
        let mut basis = Vec::with_capacity(self.m);
        for (r, &j) in self.basis.iter().enumerate() {
            if j < self.n {
                w[j] = self.x[r].max(0.0);
                basis.push(j);
            }
        }
        LpSolution {
            status,
            objective: self.lp.c.dot(&w),
            w,
            basis,
            iterations: self.iterations,
            infeasibility,
        }
    }
}
