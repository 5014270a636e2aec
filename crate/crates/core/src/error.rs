use thiserror::Error;

/// Errors produced by the umps toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("weight {weight:?} is inconsistent with n = {n}, d = {d}")]
    InconsistentWeight { weight: Vec<usize>, n: usize, d: usize },

    #[error("letter {letter} out of range for alphabet of size {n}")]
    LetterOutOfRange { letter: u8, n: usize },

    #[error("polynomials live in different variable universes ({left} vs {right})")]
    UniverseMismatch { left: String, right: String },

    #[error("no value assigned to variable {0}")]
    MissingVariable(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("word of length {0} has no base case; use reduce_word")]
    NoBaseCase(usize),

    #[error("relation mixes word lengths {0} and {1}")]
    MixedLengths(usize, usize),

    #[error("resource cap exceeded: {what} = {size} exceeds the cap of {cap}")]
    ResourceCap { what: &'static str, size: u128, cap: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
