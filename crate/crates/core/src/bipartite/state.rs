use serde::{Deserialize, Serialize};

use crate::analytic::spin1_is_prep;
use crate::angular::{coherent_ket, Direction, Spin};
use crate::density::{boundary_of_shifted, psd_check, ScaledFamily};
use crate::linalg::{self, ensure_square, hermitian_part, hermiticity_defect, CMatrix, CVector};
use crate::{Error, Result};

/// Two-spin density matrix in the A-major product basis, index `i_A·d_B + i_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    pub spin_a: Spin,
    pub spin_b: Spin,
    matrix: CMatrix,
}

impl BipartiteState {
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(spin_a: Spin, spin_b: Spin, matrix: CMatrix) -> Result<Self> {
        check_dims(spin_a, spin_b, &matrix)?;
        let defect = hermiticity_defect(&matrix);
        if defect > Self::TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::NotUnitTrace(tr));
        }
        Ok(Self { spin_a, spin_b, matrix: hermitian_part(&matrix) })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.spin_a.dim(), self.spin_b.dim())
    }
}

pub(crate) fn check_dims(spin_a: Spin, spin_b: Spin, m: &CMatrix) -> Result<()> {
    let d = ensure_square(m)?;
    let expected = spin_a.dim() * spin_b.dim();
    if d != expected {
        return Err(Error::DimensionMismatch { expected, found: d });
    }
    Ok(())
}

/// `ρ_A ⊗ ρ_B`
pub fn kron_state(spin_a: Spin, rho_a: &CMatrix, spin_b: Spin, rho_b: &CMatrix) -> Result<BipartiteState> {
    BipartiteState::new(spin_a, spin_b, linalg::kron(rho_a, rho_b))
}

/// `|α_A⟩ ⊗ |α_B⟩`
pub fn product_coherent(spin_a: Spin, alpha_a: Direction, spin_b: Spin, alpha_b: Direction) -> CVector {
    coherent_ket(spin_a, alpha_a).amplitudes.kronecker(&coherent_ket(spin_b, alpha_b).amplitudes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Transpose of one factor in the computational basis:
/// `(ρ^{T_A})_{ij,kl} = ρ_{kj,il}` and `(ρ^{T_B})_{ij,kl} = ρ_{il,kj}`.
pub fn partial_transpose(m: &CMatrix, dim_a: usize, dim_b: usize, which: Subsystem) -> CMatrix {
    CMatrix::from_fn(dim_a * dim_b, dim_a * dim_b, |r, c| {
        let (i, j) = (r / dim_b, r % dim_b);
        let (k, l) = (c / dim_b, c % dim_b);
        match which {
            Subsystem::A => m[(k * dim_b + j, i * dim_b + l)],
            Subsystem::B => m[(i * dim_b + l, k * dim_b + j)],
        }
    })
}

/// Smallest eigenvalue of `ρ^{T_A}` and whether it is non-negative.
pub fn ppt_check(rho: &CMatrix, spin_a: Spin, spin_b: Spin) -> Result<(f64, bool)> {
    check_dims(spin_a, spin_b, rho)?;
    psd_check(&partial_transpose(rho, spin_a.dim(), spin_b.dim(), Subsystem::A))
}

/// Smallest `κ > 0` where `(ρ0 + κ ρ̂)^{T_A}` acquires a zero eigenvalue.
///
/// Partial transposition is linear and fixes `ρ0`, so the crossing is
/// `−1/(d λ_min(ρ̂^{T_A}))`, as for positivity.
pub fn ppt_kappa(family: &ScaledFamily, spin_a: Spin, spin_b: Spin) -> Result<f64> {
    check_dims(spin_a, spin_b, family.direction())?;
    let pt = partial_transpose(family.direction(), spin_a.dim(), spin_b.dim(), Subsystem::A);
    Ok(boundary_of_shifted(family.dim(), &pt))
}

/// `Tr_A` of an operator on the product space.
pub fn partial_trace_a(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_b, dim_b, |j, l| (0..dim_a).map(|i| m[(i * dim_b + j, i * dim_b + l)]).sum())
}

/// `Tr_B` of an operator on the product space.
pub fn partial_trace_b(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_a, dim_a, |i, k| (0..dim_b).map(|j| m[(i * dim_b + j, k * dim_b + j)]).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialTraceVerdict {
    /// `Tr_A(ρ V_A) / tr(ρ V_A)`
    pub rho_b: CMatrix,
    /// `tr(ρ V_A)`
    pub weight: f64,
    /// `(classical, λ_min(Z))` of `rho_b` when `B` is a spin 1.
    pub spin1: Option<(bool, f64)>,
}

impl PartialTraceVerdict {
    /// A non-classical conditional state proves `ρ` non-classical.
    pub fn certifies_nonclassical(&self) -> bool {
        matches!(self.spin1, Some((false, _)))
    }
}

/// Conditional state of `B` after a positive operator `V_A` on `A`.
///
/// For a classical `ρ = Σ w |α⟩⟨α| ⊗ |β⟩⟨β|` the result is
/// `Σ w ⟨α|V_A|α⟩ |β⟩⟨β|` up to normalization, again classical; so a
/// non-classical `ρ_B` certifies that `ρ` is not.
pub fn partial_trace_witness(rho: &CMatrix, spin_a: Spin, spin_b: Spin, v_a: &CMatrix) -> Result<PartialTraceVerdict> {
    check_dims(spin_a, spin_b, rho)?;
    let da = ensure_square(v_a)?;
    if da != spin_a.dim() {
        return Err(Error::DimensionMismatch { expected: spin_a.dim(), found: da });
    }
    let (lmin, psd) = psd_check(v_a)?;
    if !psd {
        return Err(Error::NotAState(lmin));
    }
    let weighted = linalg::kron(v_a, &linalg::identity(spin_b.dim())) * rho;
    let weight = weighted.trace().re;
    if weight <= 1e-12 {
        return Err(Error::DegenerateConditional(weight));
    }
    let rho_b = hermitian_part(&partial_trace_a(&weighted, spin_a.dim(), spin_b.dim()).unscale(weight));
    let spin1 = if spin_b == Spin::ONE { Some(spin1_is_prep(&rho_b)?) } else { None };
    Ok(PartialTraceVerdict { rho_b, weight, spin1 })
}
