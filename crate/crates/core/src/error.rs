use thiserror::Error;

/// Coarse classification used for exit codes and FFI status values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// A mathematical statement was checked and found false.
    Math,
    /// An oracle could not decide (truncation, stabilization, applicability).
    Indeterminate,
    /// Malformed or inconsistent input.
    Input,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("torus rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("mismatched reference cocharacters {left} and {right}")]
    CocharacterMismatch { left: String, right: String },

    #[error("cocharacter must be nonzero")]
    ZeroCocharacter,

    #[error("non-convergent Sym: generator t^{weight} q^{degree} sits at level {level} >= 0")]
    NonConvergentSym { weight: String, degree: i64, level: i64 },

    #[error("insufficient truncation: level {level} is below cutoff {cutoff}")]
    InsufficientTruncation { level: i64, cutoff: i64 },

    #[error("{path}: {message}")]
    Input { path: String, message: String },

    #[error("model validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("polynomial parse error at byte {position} in {text:?}: {message}")]
    Parse { text: String, position: usize, message: String },

    #[error("differential does not square to zero: {0}")]
    NotAComplex(String),

    #[error("differential entry ({row}, {col}) is not homogeneous: {message}")]
    Inhomogeneous { row: usize, col: usize, message: String },

    #[error("complexes live over different base algebras")]
    BaseMismatch,

    #[error("support enumeration over {found} coordinates exceeds the limit of {limit}")]
    SupportLimit { found: usize, limit: usize },

    #[error("optimal destabilizer is not unique: {0}")]
    NonUniqueDestabilizer(String),

    #[error("differential entry ({row}, {col}) has positive level {level}; not a complex over the stratum algebra")]
    PositiveLevelEntry { row: usize, col: usize, level: i64 },

    #[error("did not stabilize within bound {max_level}")]
    NotStabilized { max_level: usize },

    #[error("series oracle inapplicable: {0}")]
    SeriesInapplicable(String),

    #[error("unavailable: {0}")]
    Unavailable(String),

    #[error("wall-crossing hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Error {
    pub fn input(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Input { path: path.into(), message: message.into() }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotAComplex(_)
            | Error::NonUniqueDestabilizer(_)
            | Error::HypothesisViolated(_)
            | Error::Internal(_) => ErrorKind::Math,
            Error::InsufficientTruncation { .. }
            | Error::NotStabilized { .. }
            | Error::SeriesInapplicable(_)
            | Error::Unavailable(_) => ErrorKind::Indeterminate,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
