use thiserror::Error;

/// Errors shared by the whole crate.
///
/// Mathematical check *failures* are not errors: verification routines return
/// reports listing residuals. An `Error` means the requested computation does
/// not make sense for the given data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("space mismatch: expected `{expected}`, got `{got}`")]
    SpaceMismatch { expected: String, got: String },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("duplicate entry: {0}")]
    DuplicateEntry(String),

    #[error("structure maps have nonzero curvature term: {0}")]
    NonzeroCurvature(String),

    #[error("not a cocycle: residual {0}")]
    NotACocycle(String),

    #[error("connection does not extend the module structure: {0}")]
    ExtensionMismatch(String),

    #[error("gauge check failed: {0}")]
    GaugeCheckFailed(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
