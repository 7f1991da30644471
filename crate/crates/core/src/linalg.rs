//! Small dense complex linear algebra shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// `identity / dim`
pub fn maximally_mixed(dim: usize) -> CMatrix {
    identity(dim).unscale(dim as f64)
}

/// Largest entrywise modulus of `m − m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    Ok(m.nrows())
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigenvalues_hermitian(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(hermitian_part(m)).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigenvalues_hermitian(m)[0]
}

/// Sum of singular values; for Hermitian input the sum of |eigenvalues|.
pub fn trace_norm(m: &CMatrix) -> f64 {
    eigenvalues_hermitian(m).iter().map(|x| x.abs()).sum()
}

/// `sqrt(tr(X† X))`
pub fn hs_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `tr(A† B)`
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Smallest `κ > 0` with `f(κ) = 0` for a function that is positive at 0 and
/// crosses zero at most once on `(0, ∞)`, located by bracket doubling and
/// bisection to absolute tolerance `tol`. Returns `None` when no sign change is
/// found below `limit`.
pub fn first_root_by_bisection(f: impl Fn(f64) -> f64, tol: f64, limit: f64) -> Option<f64> {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) >= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return None;
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_norm_of_diagonal() {
        let m = CMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(2.0 / 3.0, 0.0),
            C64::new(-1.0 / 3.0, 0.0),
            C64::new(-1.0 / 3.0, 0.0),
        ]));
        assert!((trace_norm(&m) - 4.0 / 3.0).abs() < 1e-14);
        assert!((hs_norm(&m) - (6.0f64).sqrt() / 3.0).abs() < 1e-14);
    }

    #[test]
    fn bisection_finds_linear_root() {
        let r = first_root_by_bisection(|k| 1.0 - 3.0 * k, 1e-12, 1e6).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-11);
        assert!(first_root_by_bisection(|_| 1.0, 1e-12, 1e3).is_none());
    }

    #[test]
    fn kron_dimensions_and_trace() {
        let a = maximally_mixed(2);
        let b = maximally_mixed(3);
        let k = kron(&a, &b);
        assert_eq!(k.nrows(), 6);
        assert!((k.trace().re - 1.0).abs() < 1e-15);
    }
}
