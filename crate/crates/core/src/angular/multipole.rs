use std::f64::consts::FRAC_1_SQRT_2;

use super::{clebsch_gordan, lm_count, lm_index, Spin};
use crate::linalg::{CMatrix, C64};
use crate::{Error, Result};

/// Irreducible tensor operator `T_KQ` of a spin, orthonormal under `tr(A† B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultipoleOperator {
    pub k: usize,
    pub q: i64,
    pub matrix: CMatrix,
}

fn check_rank(spin: Spin, k: usize, q: i64) -> Result<()> {
    if k > spin.k_max() || q.unsigned_abs() as usize > k {
        return Err(Error::IndexOutOfRange { k: k as i64, q, k_max: spin.k_max() as i64 });
    }
    Ok(())
}

/// `T_KQ = Σ (−1)^{j−m2} ⟨j m1; j −m2 | K Q⟩ |j m1⟩⟨j m2|`.
pub fn multipole_operator(spin: Spin, k: usize, q: i64) -> Result<MultipoleOperator> {
    check_rank(spin, k, q)?;
    let d = spin.dim();
    let tj = spin.twice_j() as i64;
    let mut matrix = CMatrix::zeros(d, d);
    for i1 in 0..d {
        let tm1 = tj - 2 * i1 as i64;
        for i2 in 0..d {
            let tm2 = tj - 2 * i2 as i64;
            if tm1 - tm2 != 2 * q {
                continue;
            }
            // j − m2 = i2
            let sign = if i2 % 2 == 0 { 1.0 } else { -1.0 };
            let c = clebsch_gordan(tj, tm1, tj, -tm2, 2 * k as i64, 2 * q)?;
            matrix[(i1, i2)] = C64::new(sign * c, 0.0);
        }
    }
    Ok(MultipoleOperator { k, q, matrix })
}

/// Coefficients `U_{(K,Q), q}` of the real recombination
/// `Y^real_KQ = Σ_q U Y_Kq`. Zero entries are omitted.
pub fn real_combination(_k: usize, q: i64) -> Vec<(i64, C64)> {
    let a = q.abs();
    let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
    match q.signum() {
        0 => vec![(0, C64::new(1.0, 0.0))],
        1 => vec![(a, C64::new(sign * FRAC_1_SQRT_2, 0.0)), (-a, C64::new(FRAC_1_SQRT_2, 0.0))],
        _ => vec![(a, C64::new(0.0, -sign * FRAC_1_SQRT_2)), (-a, C64::new(0.0, FRAC_1_SQRT_2))],
    }
}

/// Hermitian multipole operator `Σ_q U_{(K,Q),q} T_Kq`, the operator partner of
/// the real spherical harmonic with the same label.
pub fn real_multipole_operator(spin: Spin, k: usize, q: i64) -> Result<MultipoleOperator> {
    check_rank(spin, k, q)?;
    let d = spin.dim();
    let mut matrix = CMatrix::zeros(d, d);
    for (qq, u) in real_combination(k, q) {
        matrix += multipole_operator(spin, k, qq)?.matrix * u;
    }
    Ok(MultipoleOperator { k, q, matrix })
}

/// All `T_KQ` of a spin, in [`lm_index`] order.
pub fn multipole_basis(spin: Spin) -> Vec<MultipoleOperator> {
    basis_with(spin, multipole_operator)
}

/// All Hermitian real multipoles of a spin, in [`lm_index`] order.
pub fn real_multipole_basis(spin: Spin) -> Vec<MultipoleOperator> {
    basis_with(spin, real_multipole_operator)
}

fn basis_with(spin: Spin, f: fn(Spin, usize, i64) -> Result<MultipoleOperator>) -> Vec<MultipoleOperator> {
    let mut out = Vec::with_capacity(lm_count(spin.k_max()));
    for k in 0..=spin.k_max() {
        for q in -(k as i64)..=k as i64 {
            debug_assert_eq!(out.len(), lm_index(k, q));
            out.push(f(spin, k, q).expect("labels in range"));
        }
    }
    out
}
