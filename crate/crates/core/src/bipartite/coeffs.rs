use serde::{Deserialize, Serialize};

use super::state::check_dims;
use crate::angular::{lm_count, lm_index, multipole_basis, real_multipole_basis, Spin};
use crate::density::p_scale_factor;
use crate::linalg::{kron, trace_product, CMatrix, C64};
use crate::{Error, Result};

/// Coefficients over products of multipole operators, flat-indexed by
/// `lm_index(K_A, Q_A) · (2j_B+1)² + lm_index(K_B, Q_B)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteMultipole {
    pub spin_a: Spin,
    pub spin_b: Spin,
    pub values: Vec<C64>,
}

impl BipartiteMultipole {
    pub fn index(&self, ka: usize, qa: i64, kb: usize, qb: i64) -> Result<usize> {
        let (ma, mb) = (self.spin_a.k_max(), self.spin_b.k_max());
        for (k, q, m) in [(ka, qa, ma), (kb, qb, mb)] {
            if k > m || q.unsigned_abs() as usize > k {
                return Err(Error::IndexOutOfRange { k: k as i64, q, k_max: m as i64 });
            }
        }
        Ok(lm_index(ka, qa) * lm_count(mb) + lm_index(kb, qb))
    }

    pub fn get(&self, ka: usize, qa: i64, kb: usize, qb: i64) -> Result<C64> {
        Ok(self.values[self.index(ka, qa, kb, qb)?])
    }

    /// Largest violation of `c_{K_A,−Q_A;K_B,−Q_B} = (−1)^{Q_A+Q_B} conj(c_{K_AQ_A;K_BQ_B})`.
    pub fn hermiticity_defect(&self) -> f64 {
        let (ma, mb) = (self.spin_a.k_max(), self.spin_b.k_max());
        let mut worst = 0.0f64;
        for (ka, qa) in labels(ma) {
            for (kb, qb) in labels(mb) {
                let sign = if (qa + qb) % 2 == 0 { 1.0 } else { -1.0 };
                let a = self.get(ka, -qa, kb, -qb).expect("label in range");
                let b = self.get(ka, qa, kb, qb).expect("label in range").conj() * sign;
                worst = worst.max((a - b).norm());
            }
        }
        worst
    }
}

fn labels(k_max: usize) -> impl Iterator<Item = (usize, i64)> {
    (0..=k_max).flat_map(|k| (-(k as i64)..=k as i64).map(move |q| (k, q)))
}

/// `ρ_{K_AQ_A,K_BQ_B} = tr(ρ (T^A_{K_AQ_A} ⊗ T^B_{K_BQ_B})†)`
pub fn bipartite_multipole(rho: &CMatrix, spin_a: Spin, spin_b: Spin) -> Result<BipartiteMultipole> {
    check_dims(spin_a, spin_b, rho)?;
    let ta = multipole_basis(spin_a);
    let tb = multipole_basis(spin_b);
    let mut values = Vec::with_capacity(ta.len() * tb.len());
    for a in &ta {
        for b in &tb {
            values.push(trace_product(rho, &kron(&a.matrix, &b.matrix).adjoint()));
        }
    }
    Ok(BipartiteMultipole { spin_a, spin_b, values })
}

/// `Σ c (T^A ⊗ T^B)`
pub fn from_bipartite_multipole(c: &BipartiteMultipole) -> CMatrix {
    let ta = multipole_basis(c.spin_a);
    let tb = multipole_basis(c.spin_b);
    let d = c.spin_a.dim() * c.spin_b.dim();
    let mut out = CMatrix::zeros(d, d);
    let mut it = c.values.iter();
    for a in &ta {
        for b in &tb {
            out += kron(&a.matrix, &b.matrix) * *it.next().expect("table size");
        }
    }
    out
}

/// P-function coefficients: each multipole coefficient divided by
/// `c_{K_A}(j_A) c_{K_B}(j_B)`.
pub fn bipartite_p_coeffs(c: &BipartiteMultipole) -> BipartiteMultipole {
    rescale(c, |fa, fb| 1.0 / (fa * fb))
}

pub fn bipartite_rho_coeffs(p: &BipartiteMultipole) -> BipartiteMultipole {
    rescale(p, |fa, fb| fa * fb)
}

fn rescale(c: &BipartiteMultipole, f: impl Fn(f64, f64) -> f64) -> BipartiteMultipole {
    let mut values = c.values.clone();
    for (ka, qa) in labels(c.spin_a.k_max()) {
        for (kb, qb) in labels(c.spin_b.k_max()) {
            let i = c.index(ka, qa, kb, qb).expect("label in range");
            values[i] *= f(p_scale_factor(c.spin_a, ka), p_scale_factor(c.spin_b, kb));
        }
    }
    BipartiteMultipole { spin_a: c.spin_a, spin_b: c.spin_b, values }
}

/// Real-basis P coefficients `tr(ρ T^A_r ⊗ T^B_s) / (c_{K_A} c_{K_B})`, in the
/// flat order of [`BipartiteMultipole`].
pub fn bipartite_real_p_coefficients(rho: &CMatrix, spin_a: Spin, spin_b: Spin) -> Result<Vec<f64>> {
    check_dims(spin_a, spin_b, rho)?;
    let ta = real_multipole_basis(spin_a);
    let tb = real_multipole_basis(spin_b);
    let mut out = Vec::with_capacity(ta.len() * tb.len());
    for a in &ta {
        for b in &tb {
            let scale = p_scale_factor(spin_a, a.k) * p_scale_factor(spin_b, b.k);
            out.push(trace_product(rho, &kron(&a.matrix, &b.matrix)).re / scale);
        }
    }
    Ok(out)
}
