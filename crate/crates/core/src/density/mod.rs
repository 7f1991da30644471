//! Density matrices and their expansions.
//!
//! A state is carried as a dense Hermitian matrix. Its multipole coefficients
//! `ρ_KQ = tr(ρ T_KQ†)` and the P-function coefficients `P_KQ` are related
//! one-to-one for `K ≤ 2j` by a rank-dependent scale factor
//! ([`p_scale_factor`]); components with `K > 2j` of a P-function never
//! appear in a density matrix and are not stored.

mod coeffs;
mod family;
mod io;
mod mixture;
mod state;

pub use coeffs::{
    evaluate_truncated_p, from_multipole, p_coeffs_from_rho, p_scale_factor, real_coefficients,
    real_p_coefficients, rho_coeffs_from_p, to_multipole, MultipoleCoeffs, PCoeffs,
};
pub use family::{scaled_state, Norm, ScaledFamily};
pub(crate) use family::boundary_of_shifted;
pub use io::{parse_state, LoadedState, StateFile, StateKind, TwiceJ};
pub use mixture::{rho_from_mixture, Atom, DeltaMixture};
pub use state::{psd_check, DensityMatrix, PSD_TOLERANCE};
