//! Error types shared across the crate.

use thiserror::Error;

use crate::clifford::ValidationReport;

/// Errors produced by construction, classification, and solver entry points.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested center dimension has no anti-commuting family on R^n.
    #[error("no {m} anti-commuting complex structures exist on R^{n}: need m < rho(n) = {rho}")]
    Admissibility { n: usize, m: usize, rho: usize },

    /// A vector or matrix argument has the wrong dimension.
    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    /// The metric signature is not usable for an H-type algebra.
    #[error("invalid signature (p = {p}, q = {q}): {reason}")]
    InvalidSignature { p: usize, q: usize, reason: &'static str },

    /// A user-supplied generator set failed validation.
    #[error("generator set failed validation:\n{0}")]
    InvalidGenerators(ValidationReport),

    /// Spectral classification requires a nonzero center velocity.
    #[error("center velocity is zero: the operator eta*j(u) vanishes and has no block classification")]
    ZeroCenterVelocity,

    /// The input matrix is not skew-symmetric within tolerance.
    #[error("matrix is not skew-symmetric: max |J + J^T| entry is {max_violation:e}")]
    NotSkewSymmetric { max_violation: f64 },

    /// A frame or generator index is out of bounds.
    #[error("index {index} out of range for {what} (length {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    /// The principal-minor polynomial is restricted to small matrices.
    #[error("matrix dimension {n} exceeds the principal-minor limit {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },

    /// A sampling request has an empty or reversed time range.
    #[error("invalid sample range: need t0 < t1 and steps >= 2, got t0 = {t0}, t1 = {t1}, steps = {steps}")]
    InvalidRange { t0: f64, t1: f64, steps: usize },

    /// A trajectory operation requires a uniform time grid.
    #[error("trajectory grid is not uniform: step {index} deviates by {deviation:e} from spacing {spacing:e}")]
    NonUniformGrid {
        index: usize,
        spacing: f64,
        deviation: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
