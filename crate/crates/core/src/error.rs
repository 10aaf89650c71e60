use thiserror::Error;

/// Every failure the library reports. Variants map onto the CLI exit codes
/// through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),
    #[error("index set {0} is not special")]
    NotSpecial(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("weight is not dominant: {0}")]
    NotDominant(String),
    #[error("depth {required} exceeds the slice depth {available}")]
    DepthExceeded { required: usize, available: usize },
    #[error("torus value must be nonzero")]
    ZeroTorusValue,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("not a face of the monoid")]
    NotAFace,
    #[error("element is not in the monoid")]
    NotInMonoid,
    #[error("word is not in factored form u- n u+: {0}")]
    NotFactored(String),
    #[error("weight is not in the Tits cone: {0}")]
    NotInTitsCone(String),
    #[error("no verdict after {0} reflection steps")]
    Undecided(usize),
    #[error("resource guard: {0}")]
    Guard(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the `kmx` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Guard(_) => 3,
            _ => 1,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotGcm(_) => "NotGCM",
            Error::NotSymmetrizable(_) => "NotSymmetrizable",
            Error::NotSpecial(_) => "NotSpecial",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::NotDominant(_) => "NotDominant",
            Error::DepthExceeded { .. } => "DepthExceeded",
            Error::ZeroTorusValue => "ZeroTorusValue",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::NotAFace => "NotAFace",
            Error::NotInMonoid => "NotInMonoid",
            Error::NotFactored(_) => "NotFactored",
            Error::NotInTitsCone(_) => "NotInTitsCone",
            Error::Undecided(_) => "Undecided",
            Error::Guard(_) => "ResourceGuard",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
