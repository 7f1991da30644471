//! Spin-algebra primitives.
//!
//! Basis convention throughout the crate: `|j m⟩` with `m` descending, so index
//! 0 holds `m = j` and index `2j` holds `m = −j`. Phases follow Condon-Shortley.

mod clebsch;
mod coherent;
mod harmonics;
mod multipole;
mod quadrature;
mod spin;

pub use clebsch::{clebsch_gordan, ln_factorial};
pub use coherent::{coherent_ket, CoherentKet};
pub use harmonics::{
    complex_harmonics, lm_count, lm_index, real_harmonics, real_spherical_harmonic,
    spherical_harmonic,
};
pub use multipole::{
    multipole_basis, multipole_operator, real_combination, real_multipole_basis,
    real_multipole_operator, MultipoleOperator,
};
pub use quadrature::{gauss_legendre, identity_resolution_check, SphereQuadrature};
pub use spin::{angular_momentum_ops, spin_component, Direction, Spin};
