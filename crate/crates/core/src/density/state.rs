use crate::linalg::{self, hermitian_part, hermiticity_defect, CMatrix, CVector};
use crate::{Error, Result};

/// Eigenvalues above `−PSD_TOLERANCE` count as non-negative.
pub const PSD_TOLERANCE: f64 = 1e-12;

/// Hermitian, unit-trace matrix. Positivity is not assumed; query it with
/// [`DensityMatrix::min_eigenvalue`] or [`psd_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Self::TOLERANCE)
    }

    /// Validates Hermiticity and unit trace to `tol`, then stores the exact
    /// Hermitian part.
    pub fn with_tolerance(matrix: CMatrix, tol: f64) -> Result<Self> {
        linalg::ensure_square(&matrix)?;
        let defect = hermiticity_defect(&matrix);
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::NotUnitTrace(tr));
        }
        Ok(Self { matrix: hermitian_part(&matrix) })
    }

    /// No validation; used for raw inputs.
    pub fn new_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: linalg::maximally_mixed(dim) }
    }

    /// `|ψ⟩⟨ψ|` for a normalized ket.
    pub fn pure(ket: &CVector) -> Self {
        let k = ket.unscale(ket.norm());
        Self { matrix: &k * k.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `Re tr(ρ A)`
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        linalg::trace_product(&self.matrix, op).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.matrix)
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOLERANCE
    }

    pub fn purity(&self) -> f64 {
        linalg::hs_inner(&self.matrix, &self.matrix).re
    }
}

/// `(λ_min, λ_min ≥ −1e-12)` of a Hermitian matrix.
pub fn psd_check(m: &CMatrix) -> Result<(f64, bool)> {
    linalg::ensure_square(m)?;
    let defect = hermiticity_defect(m);
    if defect > DensityMatrix::TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    let lmin = linalg::min_eigenvalue(m);
    Ok((lmin, lmin >= -PSD_TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{coherent_ket, Direction, Spin};
    use crate::linalg::{C64, I};

    #[test]
    fn maximally_mixed_min_eigenvalue() {
        for d in 2..7 {
            let (l, ok) = psd_check(DensityMatrix::maximally_mixed(d).matrix()).unwrap();
            assert!((l - 1.0 / d as f64).abs() < 1e-14 && ok);
        }
    }

    #[test]
    fn coherent_projector_is_boundary() {
        let ket = coherent_ket(Spin::new(3).unwrap(), Direction::new(1.0, 2.0)).amplitudes;
        let rho = DensityMatrix::pure(&ket);
        let (l, ok) = psd_check(rho.matrix()).unwrap();
        assert!(l.abs() < 1e-14 && ok);
        assert!((rho.purity() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn validation() {
        let mut m = linalg::maximally_mixed(2);
        m[(0, 1)] = I;
        assert!(matches!(DensityMatrix::new(m.clone()), Err(Error::NotHermitian(_))));
        assert!(matches!(psd_check(&m), Err(Error::NotHermitian(_))));
        let m = linalg::identity(2);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotUnitTrace(_))));
        let mut m = linalg::maximally_mixed(2);
        m[(0, 1)] = C64::new(0.0, 1e-12);
        m[(1, 0)] = C64::new(0.0, -1e-12);
        assert!(DensityMatrix::new(m).is_ok());
    }
}
