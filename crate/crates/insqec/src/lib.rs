//! Simulation library for single-insertion error correction on gnu
//! permutation-invariant codes.
//!
//! The protocol under test: encode a logical qubit into a gnu code on
//! `N = g*n*u` qubits, apply a single-qubit insertion at an unknown
//! position, extract a two-bit syndrome `(j, w)` by measuring total
//! angular momentum and its z-projection modulo the code gap, then
//! teleport the projected state back onto a fresh gnu code.
//!
//! Two independent computation routes are kept throughout: closed-form
//! expressions built from exact big-integer arithmetic ([`analytic`],
//! [`cg`]) and a brute-force dense statevector layer ([`oracle`],
//! [`scb`]). Tests and the CLI cross-check one against the other.

pub mod analytic;
pub mod cg;
pub mod channel;
mod error;
pub mod exact;
mod halfint;
pub mod oracle;
pub mod recovery;
pub mod scb;
pub mod states;

pub use error::{Error, Result};
pub use halfint::HalfInt;

/// Default ceiling on dense statevector size, in qubits.
pub const DEFAULT_MAX_QUBITS: usize = 14;

/// Dense-state qubit cap; `INSQEC_MAX_QUBITS` overrides it at the
/// caller's risk.
pub fn max_qubits() -> usize {
    std::env::var("INSQEC_MAX_QUBITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}
