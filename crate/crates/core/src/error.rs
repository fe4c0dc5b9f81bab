use std::fmt;

/// Errors raised by the library. Domain violations are reported with enough
/// context to locate the offending input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Syntax error in polynomial text; `pos` is a 0-based byte offset.
    Syntax { pos: usize, msg: String },
    /// A variable was used that the requested variable count does not allow.
    VarNotAllowed { pos: usize, var: char },
    /// Operands live in polynomial rings with different variable counts.
    NvarsMismatch { left: usize, right: usize },
    /// The polynomial has a nonzero constant term but was required to lie in
    /// the maximal ideal (x, y).
    ConstantTerm,
    /// A nonzero polynomial was required.
    ZeroPoly,
    /// Inconsistent factorization data (multiplicities, classes, reps).
    BadFactorData(String),
    /// A chain of subsets that is not a flag, or indexes out of range.
    BadFlag(String),
    /// A word whose letter counts do not match the multiplicity vector.
    BadWord(String),
    /// A subset of {1..n} with an out-of-range member.
    BadSubset(String),
    /// An invalid summand set J.
    BadSummands(String),
    /// A sequence that is not a permutation of {1..n}.
    NotPermutation(String),
    /// Polynomial representatives are required for this operation.
    MissingReps,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Syntax { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            Error::VarNotAllowed { pos, var } => {
                write!(f, "variable '{var}' not allowed here (byte {pos})")
            }
            Error::NvarsMismatch { left, right } => {
                write!(f, "mismatched variable counts: {left} vs {right}")
            }
            Error::ConstantTerm => write!(f, "polynomial has a nonzero constant term"),
            Error::ZeroPoly => write!(f, "polynomial must be nonzero"),
            Error::BadFactorData(msg) => write!(f, "invalid factorization data: {msg}"),
            Error::BadFlag(msg) => write!(f, "invalid flag: {msg}"),
            Error::BadWord(msg) => write!(f, "invalid word: {msg}"),
            Error::BadSubset(msg) => write!(f, "invalid subset: {msg}"),
            Error::BadSummands(msg) => write!(f, "invalid summand set: {msg}"),
            Error::NotPermutation(msg) => write!(f, "not a permutation: {msg}"),
            Error::MissingReps => write!(f, "polynomial representatives are required"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
