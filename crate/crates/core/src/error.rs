use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u32),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("quiver has a directed cycle through vertex {0:?}")]
    CyclicQuiver(String),

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("objects live over different base categories")]
    BaseMismatch,

    /// A structural law failed; the first field names it (e.g. `d-squared`,
    /// `intertwiner`, `chain-map`, `homotopy`).
    #[error("{law} law violated: {detail}")]
    LawViolation { law: &'static str, detail: String },

    #[error("not a heart object for the t-structure at {shift}: {detail}")]
    NotInHeart { shift: i32, detail: String },

    #[error("no factorization through the given map: {0}")]
    NoFactorization(String),

    #[error("unresolved reference to {kind} {name:?}")]
    Unresolved { kind: &'static str, name: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported format_version {0}")]
    UnsupportedVersion(u32),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn law(law: &'static str, detail: impl Into<String>) -> Self {
        Error::LawViolation {
            law,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
