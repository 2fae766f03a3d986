use thiserror::Error;

/// Errors raised by graph construction, solvers, and spectral routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),

    #[error("duplicate edge `{0}` -- `{1}`")]
    DuplicateEdge(String, String),

    #[error("non-positive weight {weight} on edge `{a}` -- `{b}`")]
    NonPositiveWeight { a: String, b: String, weight: f64 },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}` in section")]
    DuplicateVertex(String),

    #[error("base point `{0}` may not be a member of the section")]
    BaseInSection(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("vectors live on different hosts or base points")]
    HostMismatch,

    #[error("dipole endpoints coincide at `{0}`")]
    DegenerateDipole(String),

    #[error("charge distribution is not zero-sum (sum = {0:.3e}); no finite-energy solution")]
    NotZeroSum(f64),

    #[error("{what} must be at least {min}, got {got}")]
    SizeOutOfRange {
        what: &'static str,
        min: i64,
        got: i64,
    },

    #[error("instance radius {got} too small; need at least {needed}")]
    RadiusTooSmall { needed: usize, got: usize },

    #[error("matrix is not symmetric (max deviation {0:.3e})")]
    Asymmetric(f64),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.6e})")]
    NotPositiveSemidefinite(f64),

    #[error("kernel section is entirely null; no truncation exists")]
    AllZeroGram,

    #[error("label `{0}` is outside the kernel index")]
    LabelOutsideIndex(String),

    #[error("sample point {0} outside [0, 1)")]
    InvalidSamplePoint(f64),

    #[error("duplicate sample point {0}")]
    DuplicateSamplePoint(f64),

    #[error("linear system is singular")]
    SingularSystem,

    #[error("operation requires the {0} family")]
    WrongFamily(&'static str),

    #[error("vertex `{0}` does not belong to the family pattern")]
    NotInFamily(String),

    #[error("exhaustion rule `{0}` is not nested; a nested rule is required here")]
    NonNestedRule(&'static str),

    #[error("base value must be 0, found {0}")]
    BaseNotPinned(f64),

    #[error("numerical contract violated: {what} = {value:.6e} exceeds tolerance {tolerance:.1e}")]
    ContractViolation {
        what: String,
        value: f64,
        tolerance: f64,
    },

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
