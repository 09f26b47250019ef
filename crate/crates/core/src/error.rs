use thiserror::Error;

#[derive(Debug, Error)]
pub enum GibbsError {
    /// Model parameters outside the supported range (dimension, regularity,
    /// renormalizable regime).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Malformed interaction polynomial (wrong arity, zero polynomial where
    /// a nonconstant one is required, ...).
    #[error("invalid interaction: {0}")]
    InvalidInteraction(String),

    /// Malformed auxiliary input (exponent maps, drift configuration, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A numerical consistency check failed (e.g. imaginary residue above
    /// tolerance after a transform that must be real).
    #[error("numerics: {0}")]
    Numerics(String),

    /// Requested operation is outside the implemented envelope
    /// (e.g. sampling in dimension > 3).
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, GibbsError>;
