//! Arbitrary-precision engine for q-orthogonal polynomials on the lattice {±q^k}.
//!
//! The crate computes moments and three-term recurrence data of polynomials
//! orthogonal with respect to weighted two-sided Jackson integrals, evaluates
//! the q-special functions h^α, f, g, g_n, builds the power-series solutions of
//! the limiting q-difference system (series at 0 and at ∞ plus their connection
//! constants), and measures the large-degree behaviour of P_n, γ_n and a_n
//! against the predicted geometric rates.
//!
//! The crate is `no_std` (alloc required); all IO, file formats and the CLI live
//! in the companion `qortho-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod modelrhp;
pub mod numerics;
pub mod orthopoly;
pub mod qcalc;
pub mod verify;
pub mod weights;

pub use error::{QError, QResult};
