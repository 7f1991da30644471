//! Classicality of finite-dimensional spin states.
//!
//! A spin state is *classical* (P-representable) when its density matrix is a
//! convex mixture of angular-momentum coherent-state projectors. This crate
//! decides membership in that convex set, produces explicit certificates
//! ([`DeltaMixture`]) or witness-based refutations, and locates the boundary of
//! the classical set along arbitrary directions from the maximally mixed state,
//! for single spins and for pairs of spins.
//!
//! Module map:
//!
//! - [`angular`]: angular-momentum matrices, coherent states, Clebsch-Gordan
//!   coefficients, multipole operators, spherical harmonics.
//! - [`density`]: density matrices, multipole and P-function coefficients,
//!   discrete P-functions, scaled families `ρ0 + κ ρ̂`, state files.
//! - [`analytic`]: closed-form results for spin 1/2 and spin 1, moment witnesses.
//! - [`lpsolve`]: sphere grids, a dense revised simplex and the δ-peak linear
//!   programs for membership and boundary search.
//! - [`bipartite`]: two-spin states, partial transpose, product-grid linear
//!   programs, the partial-trace witness and two-dimensional boundary scans.

pub mod analytic;
pub mod angular;
pub mod bipartite;
pub mod density;
mod error;
pub mod linalg;
pub mod lpsolve;
pub mod random;

pub use error::{Error, Result};

pub use angular::{CoherentKet, Direction, MultipoleOperator, Spin};
pub use density::{DeltaMixture, DensityMatrix, MultipoleCoeffs, Norm, PCoeffs, ScaledFamily};

/// Crate version, stamped into JSON outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
