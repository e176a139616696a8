//! Error type shared by all modules.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two mixed vectors with different block widths were combined.
    ShapeMismatch {
        left: (usize, usize, usize),
        right: (usize, usize, usize),
    },
    /// Two ring vectors with different moduli or lengths were combined.
    RingMismatch { expected: String, found: String },
    /// A digit outside its block alphabet.
    DigitOutOfRange { modulus: u64, digit: u64 },
    /// Exponents or parameters outside the bounds of a construction.
    InvalidParameter(String),
    /// A structural invariant did not hold (duplicate codewords, cardinality
    /// drop, inconsistent rank/kernel routes, ...).
    Integrity(String),
    /// Text that does not parse as a vector, matrix, word, or descriptor.
    Parse(String),
    /// An operation that needs the all-zero word got a code without it.
    MissingZeroWord,
    /// An operation that needs a power-of-two code size got something else.
    SizeNotPowerOfTwo(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { left, right } => {
                write!(f, "shape mismatch: {:?} vs {:?}", left, right)
            }
            Error::RingMismatch { expected, found } => {
                write!(f, "ring mismatch: expected {}, found {}", expected, found)
            }
            Error::DigitOutOfRange { modulus, digit } => {
                write!(f, "digit {} out of range for Z{}", digit, modulus)
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {}", msg),
            Error::Integrity(msg) => write!(f, "integrity violation: {}", msg),
            Error::Parse(msg) => write!(f, "parse error: {}", msg),
            Error::MissingZeroWord => write!(f, "code does not contain the all-zero word"),
            Error::SizeNotPowerOfTwo(n) => {
                write!(f, "code size {} is not a power of two", n)
            }
        }
    }
}

impl std::error::Error for Error {}
