//! Closed-form classicality results: spin 1/2, spin 1, and moment witnesses
//! for arbitrary spin.

mod qubit;
mod spin_one;
mod witness;

pub use qubit::{bloch_vector, qubit_decompose, BlochVector};
pub use spin_one::{spin1_decompose, spin1_frame, spin1_is_prep, spin1_kappa_e, SpinOneFrame, SPIN1_TOLERANCE};
pub use witness::{
    second_moment_form, spin_moments, witness_scan, witness_second_moment, witness_third_moment_spin32,
    Verdict, WitnessKind, WitnessReport, WitnessScan, WITNESS_TOLERANCE,
};
