use alloc::string::String;
use core::fmt;

/// Errors raised by the exact algebra routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The modulus is zero or one, or too large for exact word arithmetic.
    InvalidModulus(u64),
    /// Two objects built over different moduli were combined.
    ModulusMismatch { left: u64, right: u64 },
    /// Matrix or vector dimensions do not fit together.
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    /// A linear system has no solution.
    NoSolution(String),
    /// A matrix does not send relations to relations.
    NotWellDefined(String),
    /// A label does not name an action of the multimodule.
    UnknownLabel(String),
    /// The same label is used twice on one multimodule.
    DuplicateLabel(String),
    /// Index families of two objects do not match.
    IndexMismatch(String),
    /// Two actions that must share an algebra do not.
    AlgebraMismatch(String),
    /// A contraction is not stable under the index involution.
    NotStable(String),
    /// A trace relation is not compatible with the index involution.
    NotCompatible(String),
    /// An involution required by the construction is missing.
    MissingInvolution(String),
    /// An acting algebra is not central over the base ring.
    NotRCentral(String),
    /// A signature does not fit the multimodules it connects.
    IncompatibleSignature(String),
    /// Selections are not nested as required.
    InclusionViolation(String),
    /// A map that should be invertible is not.
    NotInvertible(String),
    /// A size computation exceeded the supported range.
    SizeOverflow(String),
    /// The request is outside what the routine supports.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidModulus(n) => write!(f, "invalid modulus {n}"),
            Error::ModulusMismatch { left, right } => {
                write!(f, "modulus mismatch: {left} vs {right}")
            }
            Error::DimensionMismatch {
                context,
                expected,
                found,
            } => write!(f, "{context}: expected dimension {expected}, found {found}"),
            Error::NoSolution(s) => write!(f, "no solution: {s}"),
            Error::NotWellDefined(s) => write!(f, "not well defined: {s}"),
            Error::UnknownLabel(s) => write!(f, "unknown action label `{s}`"),
            Error::DuplicateLabel(s) => write!(f, "duplicate action label `{s}`"),
            Error::IndexMismatch(s) => write!(f, "index mismatch: {s}"),
            Error::AlgebraMismatch(s) => write!(f, "algebra mismatch: {s}"),
            Error::NotStable(s) => write!(f, "contraction not stable under involution: {s}"),
            Error::NotCompatible(s) => write!(f, "trace relation not compatible: {s}"),
            Error::MissingInvolution(s) => write!(f, "missing involution: {s}"),
            Error::NotRCentral(s) => write!(f, "algebra not central over the base ring: {s}"),
            Error::IncompatibleSignature(s) => write!(f, "incompatible signature: {s}"),
            Error::InclusionViolation(s) => write!(f, "selections not nested: {s}"),
            Error::NotInvertible(s) => write!(f, "not invertible: {s}"),
            Error::SizeOverflow(s) => write!(f, "size overflow: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

impl core::error::Error for Error {}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
