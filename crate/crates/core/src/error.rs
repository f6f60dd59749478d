use thiserror::Error;

use crate::validate::Verdict;

/// Errors raised by the geometry kernels, pairing utilities and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input points are collinear or coincide where a proper triangle is needed.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// An interval or scale parameter is out of its admissible range.
    #[error("invalid range: {0}")]
    InvalidRange(String),

    /// The instance failed the validation gate of the requested objective.
    #[error("instance rejected: {0}")]
    InvalidInstance(Verdict),

    /// Malformed instance data (counts, non-finite coordinates).
    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    /// A camera pairing does not cover the cameras exactly once.
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    /// The brute-force oracle refuses instances above its enumeration cap.
    #[error("instance too large for exhaustive search: n = {n}, cap = {cap}")]
    InstanceTooLarge { n: usize, cap: usize },

    /// Bucket maps violate the per-bucket or balance constraints.
    #[error("bucket map constraint violated: {0}")]
    ConstraintViolated(String),

    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(String),

    /// Approximation parameter outside (0, 1).
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
