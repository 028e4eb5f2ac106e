//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the verification kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Interval constructed with `lo > hi` or a NaN endpoint.
    #[error("invalid interval endpoints [{0}, {1}]")]
    BadEndpoints(String, String),

    /// Division by an interval containing zero.
    #[error("division by an interval containing zero")]
    DivisionByZero,

    /// Square root of an interval reaching below zero.
    #[error("sqrt of an interval reaching below zero (lo = {0})")]
    NegativeSqrt(String),

    /// Matrix dimensions incompatible with the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A bound that must be nonnegative or ordered was not.
    #[error("invalid derivative bounds: {0}")]
    InvalidBounds(String),

    /// Expansion rate `m` must exceed 1.
    #[error("cone rate m = {0} must be greater than 1")]
    InvalidRate(String),

    /// Rescaling factor `v` must be positive.
    #[error("rescaling factor v = {0} must be positive")]
    InvalidRescale(String),

    /// Covering checker invoked with no chart triples.
    #[error("no chart triples supplied to the covering checker")]
    EmptyCovering,

    /// Atlas circumference below the minimum of 9.
    #[error("atlas circumference v = {0} is below the minimum of 9")]
    AtlasTooSmall(u64),

    /// Point outside the chart window it was addressed to.
    #[error("point {point} is outside window {window}")]
    OutsideWindow { point: String, window: String },

    /// Map parameters violating a structural precondition.
    #[error("invalid map parameters: {0}")]
    InvalidParams(String),

    /// Spectrum degenerate: the two eigenvalues cannot be separated.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// The parameter scan could not certify anything, even at epsilon = 0.
    #[error("parameter scan failed at epsilon = 0; parameters are inconsistent")]
    ScanInconsistent,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
