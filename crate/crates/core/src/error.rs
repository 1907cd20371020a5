use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("empty input")]
    EmptyInput,

    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("alphabet of {size} propositions exceeds the enumeration cap of {cap}")]
    AlphabetTooLarge { size: usize, cap: usize },

    #[error("negative mass {mass} at world {world}")]
    NegativeMass { world: String, mass: String },

    #[error("total mass {0} ≠ 1")]
    TotalMass(String),

    #[error("world {world} is outside the sample space of {props} propositions")]
    WorldOutOfRange { world: String, props: usize },

    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("column index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("tuple outside the declared active domain: {0}")]
    OutsideDomain(String),

    #[error("unbounded variable over an infinite carrier: {0}")]
    InfiniteCarrier(String),

    #[error("unassigned variable `{0}`")]
    Unassigned(String),

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("unknown world index {0}")]
    UnknownWorld(usize),

    #[error("empty world set")]
    EmptyWorldSet,

    #[error("union of an empty concept set")]
    EmptyUnion,

    #[error("invalid interval [{lo}, {hi}]: {reason}")]
    InvalidInterval { lo: String, hi: String, reason: String },

    #[error("rule head must be a single atom, found `{0}`")]
    NonAtomicHead(String),

    #[error("non-ground rule at offset {offset}: {message}")]
    NonGround { offset: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid document: {0}")]
    Document(String),
}

impl Error {
    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    /// Shifts the byte offset of a positional error; used when a sub-parser
    /// works on a slice of a larger document.
    pub(crate) fn shifted(self, by: usize) -> Self {
        match self {
            Error::Syntax { offset, message } => Error::Syntax {
                offset: offset + by,
                message,
            },
            Error::NonGround { offset, message } => Error::NonGround {
                offset: offset + by,
                message,
            },
            Error::EmptyInput => Error::Syntax {
                offset: by,
                message: "expected a formula".into(),
            },
            other => other,
        }
    }
}
