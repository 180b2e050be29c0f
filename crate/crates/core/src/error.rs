use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("a layout needs at least one subsystem")]
    EmptyLayout,
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("bosonic cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),
    #[error("level {level} out of range for subsystem `{label}` of dimension {dim}")]
    LevelOutOfRange { label: String, level: usize, dim: usize },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operands live on different layouts")]
    LayoutMismatch,
    #[error("linear combination vanishes")]
    ZeroVector,
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("subsystem `{label}` must be {expected}")]
    WrongSubsystemKind { label: String, expected: &'static str },
    #[error("the set of kept subsystems is empty")]
    EmptyKeepSet,
    #[error("{name} out of range {range}, got {value}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("cutoff {cutoff} too small: truncated weight {weight:e} exceeds {limit:e}")]
    CutoffTooSmall { cutoff: usize, weight: f64, limit: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}
