use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::coeffs::bipartite_real_p_coefficients;
use super::state::check_dims;
use crate::angular::{coherent_ket, lm_count, real_harmonics, Direction, Spin};
use crate::density::ScaledFamily;
use crate::linalg::{hs_norm, kron, CMatrix};
use crate::lpsolve::{
    fibonacci_grid, nested_min_weight, simplex_solve_with, with_residual_slacks, BoundaryResult, LpStandardForm,
    LpStatus, SimplexOptions, SphereGrid,
};
use crate::{Error, Result};

/// Grid schedule for the product-grid programs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteOptions {
    /// Level `i` adds `fibonacci_grid(n_A)` to the A grid and
    /// `fibonacci_grid(n_B)` to the B grid; columns are all pairs.
    pub schedule: Vec<(usize, usize)>,
    /// Relative stopping tolerance on consecutive `1/κ` estimates.
    pub tolerance: f64,
    /// Add the mirror image `(θ, −φ)` of every A point.
    pub mirror_a: bool,
}

impl BipartiteOptions {
    /// `levels` doubling steps from `(16 d_A, 16 d_B + 1)`; the sizes differ so
    /// that the two spirals never line up.
    pub fn for_spins(spin_a: Spin, spin_b: Spin, levels: usize) -> Self {
        let (na, nb) = (16 * spin_a.dim(), 16 * spin_b.dim() + 1);
        Self {
            schedule: (0..levels).map(|l| (na << l, nb << l)).collect(),
            tolerance: 1e-4,
            mirror_a: false,
        }
    }
}

/// Union of A and B grids with the list of point pairs in column order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProductGrid {
    pub a: SphereGrid,
    pub b: SphereGrid,
    pub pairs: Vec<(usize, usize)>,
}

impl ProductGrid {
    /// Adds points to both factors and returns the new pairs, which are
    /// appended after the existing ones.
    pub fn extend(&mut self, new_a: &SphereGrid, new_b: &SphereGrid) -> Vec<(usize, usize)> {
        let (a0, b0) = (self.a.len(), self.b.len());
        self.a.extend(new_a);
        self.b.extend(new_b);
        let mut added = Vec::new();
        for i in 0..self.a.len() {
            let from = if i < a0 { b0 } else { 0 };
            for j in from..self.b.len() {
                added.push((i, j));
            }
        }
        self.pairs.extend_from_slice(&added);
        added
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductAtom {
    pub weight: f64,
    pub a: Direction,
    pub b: Direction,
}

/// `Σ w |α⟩⟨α| ⊗ |β⟩⟨β|`, a separable and classical two-spin state.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductMixture {
    pub atoms: Vec<ProductAtom>,
}

impl ProductMixture {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn matrix(&self, spin_a: Spin, spin_b: Spin) -> CMatrix {
        let d = spin_a.dim() * spin_b.dim();
        let mut out = CMatrix::zeros(d, d);
        for at in &self.atoms {
            let p = kron(&coherent_ket(spin_a, at.a).projector(), &coherent_ket(spin_b, at.b).projector());
            out += p.scale(at.weight);
        }
        out
    }

    pub fn residual(&self, spin_a: Spin, spin_b: Spin, rho: &CMatrix) -> f64 {
        hs_norm(&(self.matrix(spin_a, spin_b) - rho))
    }

    /// The same mixture with every A point mirrored: the certificate of `ρ^{T_A}`.
    pub fn mirrored_a(&self) -> Self {
        Self { atoms: self.atoms.iter().map(|x| ProductAtom { a: x.a.mirrored(), ..*x }).collect() }
    }
}

/// Products of real harmonics for every pair, omitting the `(0,0;0,0)` row.
struct PairColumns {
    ya: Vec<Vec<f64>>,
    yb: Vec<Vec<f64>>,
    ka: usize,
    kb: usize,
}

impl PairColumns {
    fn new(spin_a: Spin, spin_b: Spin) -> Self {
        Self { ya: Vec::new(), yb: Vec::new(), ka: spin_a.k_max(), kb: spin_b.k_max() }
    }

    fn rows(&self) -> usize {
        lm_count(self.ka) * lm_count(self.kb) - 1
    }

    fn add_points(&mut self, a: &SphereGrid, b: &SphereGrid) {
        self.ya.extend(a.points().iter().map(|p| real_harmonics(self.ka, *p)));
        self.yb.extend(b.points().iter().map(|p| real_harmonics(self.kb, *p)));
    }

    fn columns(&self, pairs: &[(usize, usize)]) -> DMatrix<f64> {
        let nb = lm_count(self.kb);
        let mut m = DMatrix::zeros(self.rows(), pairs.len());
        for (c, &(i, j)) in pairs.iter().enumerate() {
            let (ya, yb) = (&self.ya[i], &self.yb[j]);
            let mut col = m.column_mut(c);
            for (r, x) in ya.iter().enumerate() {
                for (s, y) in yb.iter().enumerate() {
                    let idx = r * nb + s;
                    if idx > 0 {
                        col[idx - 1] = x * y;
                    }
                }
            }
        }
        m
    }
}

fn level_grids(options: &BipartiteOptions, level: usize) -> Option<(SphereGrid, SphereGrid)> {
    let &(na, nb) = options.schedule.get(level)?;
    let mut a = fibonacci_grid(na.max(1));
    if options.mirror_a {
        a = a.mirror_closed();
    }
    Some((a, fibonacci_grid(nb.max(1))))
}

/// Boundary of the classical set along a two-spin family, from the
/// minimum-weight program over products of grid points.
pub fn bipartite_boundary_kappa(
    family: &ScaledFamily,
    spin_a: Spin,
    spin_b: Spin,
    options: &BipartiteOptions,
) -> Result<BoundaryResult<ProductMixture>> {
    check_dims(spin_a, spin_b, family.direction())?;
    let target = bipartite_real_p_coefficients(family.direction(), spin_a, spin_b)?;
    let b = DVector::from_column_slice(&target[1..]);
    let mut grid = ProductGrid::default();
    let mut cols = PairColumns::new(spin_a, spin_b);
    let outcome = nested_min_weight(
        &b,
        |level| {
            let (ga, gb) = level_grids(options, level)?;
            cols.add_points(&ga, &gb);
            let added = grid.extend(&ga, &gb);
            Some(cols.columns(&added))
        },
        options.tolerance,
    )?;
    let value = outcome.solution.objective;
    let kappa_e = 1.0 / value;
    let mixture = ProductMixture {
        atoms: outcome
            .solution
            .support(0.0)
            .into_iter()
            .map(|c| {
                let (i, j) = grid.pairs[c];
                ProductAtom { weight: outcome.solution.w[c] / value, a: grid.a.points()[i], b: grid.b.points()[j] }
            })
            .collect(),
    };
    let residual = if kappa_e.is_finite() {
        mixture.residual(spin_a, spin_b, &family.state_matrix(kappa_e))
    } else {
        f64::NAN
    };
    Ok(BoundaryResult {
        kappa_e,
        mixture,
        grid_size: outcome.columns,
        history: outcome.history,
        converged: outcome.converged,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteDecision {
    pub prep: bool,
    pub mixture: ProductMixture,
    pub residual: f64,
    pub grid_size: usize,
}

/// Membership test on the product grid of the last schedule level, by
/// ℓ1-residual minimization as in the single-spin case.
pub fn bipartite_decide(
    rho: &CMatrix,
    spin_a: Spin,
    spin_b: Spin,
    options: &BipartiteOptions,
    tolerance: f64,
) -> Result<BipartiteDecision> {
    check_dims(spin_a, spin_b, rho)?;
    let real = bipartite_real_p_coefficients(rho, spin_a, spin_b)?;
    let mut grid = ProductGrid::default();
    let mut cols = PairColumns::new(spin_a, spin_b);
    let mut level = 0;
    while let Some((ga, gb)) = level_grids(options, level) {
        cols.add_points(&ga, &gb);
        grid.extend(&ga, &gb);
        level += 1;
    }
    if grid.is_empty() {
        return Err(Error::Lp("empty grid schedule".into()));
    }
    let a = cols.columns(&grid.pairs).insert_row(cols.rows(), 1.0);
    let m = a.nrows();
    let b = DVector::from_iterator(m, real[1..].iter().copied().chain([1.0]));
    let lp = LpStandardForm::new(DVector::zeros(a.ncols()), a, b)?;
    let (lp, slacks) = with_residual_slacks(&lp)?;
    let start: Vec<usize> = (0..m).map(|i| if lp.b[i] >= 0.0 { i } else { m + i }).collect();
    let sol = simplex_solve_with(&lp, &SimplexOptions::default(), Some(&start))?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("residual program ended {:?}", sol.status)));
    }
    let mixture = ProductMixture {
        atoms: (0..grid.len())
            .filter(|&c| sol.w[slacks + c] > 0.0)
            .map(|c| {
                let (i, j) = grid.pairs[c];
                ProductAtom { weight: sol.w[slacks + c], a: grid.a.points()[i], b: grid.b.points()[j] }
            })
            .collect(),
    };
    let residual = mixture.residual(spin_a, spin_b, rho);
    Ok(BipartiteDecision { prep: residual <= tolerance, mixture, residual, grid_size: grid.len() })
}
