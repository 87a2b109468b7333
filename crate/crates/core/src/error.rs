use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid length {len}: {reason}")]
    InvalidLength { len: usize, reason: &'static str },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("{k} does not divide {n}")]
    NotADivisor { k: usize, n: usize },

    #[error("{value} is not primitive")]
    NotPrimitive { value: String },

    #[error("{value} is not a member of {set}")]
    NotInSet { value: String, set: &'static str },

    #[error("{value}: {reason}")]
    Precondition { value: String, reason: String },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("{poly} is not irreducible")]
    NotIrreducible { poly: String },

    #[error("no normal basis generator alpha^k found for modulus {modulus}")]
    NoNormalBasis { modulus: String },

    #[error("root isolation failed for n = {n}: {reason}")]
    Isolation { n: u32, reason: String },

    #[error("consistency check `{check}` failed: {detail}")]
    Consistency { check: &'static str, detail: String },
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn precondition(value: impl ToString, reason: impl Into<String>) -> Self {
        Error::Precondition {
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn consistency(check: &'static str, detail: impl Into<String>) -> Self {
        Error::Consistency {
            check,
            detail: detail.into(),
        }
    }
}
