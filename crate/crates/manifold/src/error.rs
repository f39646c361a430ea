//! Error types for geometry validation and the inner descent engine.

use crate::point::{BackendId, Point};
use thiserror::Error;

/// Rejections raised by validating entry points of geometry backends.
///
/// These cover *data* problems (bad coordinates, wrong backend, degenerate
/// spectra, parameters outside their documented range). Violations of
/// documented preconditions inside the geometry kernels themselves are
/// programmer errors and panic instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("backend mismatch: expected {expected}, got {got}")]
    BackendMismatch { expected: BackendId, got: BackendId },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid tangent: {0}")]
    InvalidTangent(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("degenerate direction: {0}")]
    Degenerate(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

/// The inner descent engine stopped at its iteration cap before reaching the
/// requested certificate gap. Carries the best iterate found so callers can
/// degrade gracefully or surface a useful diagnostic.
#[derive(Debug, Clone, Error)]
#[error(
    "descent stalled after {iters} iterations: certificate gap {cert_gap:.3e} > target {tol:.3e}"
)]
pub struct DescentError {
    pub best: Point,
    pub value: f64,
    pub grad_norm: f64,
    pub cert_gap: f64,
    pub tol: f64,
    pub iters: usize,
}
