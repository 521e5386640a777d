use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("incomplete projector set: total probability {0}")]
    IncompleteProjectors(f64),
    #[error("logical-X unsupported for this codespace")]
    LogicalXUnsupported,
    #[error("code gap mismatch: ancilla gap {ancilla} vs projected-code gap {code}")]
    GapMismatch { ancilla: u32, code: u32 },
    #[error("codespace leakage {0:.3e} exceeds tolerance")]
    Leakage(f64),
    #[error("zero codeword for this (j, w) branch")]
    ZeroCodeword,
}

pub type Result<T> = std::result::Result<T, Error>;
