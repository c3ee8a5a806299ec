use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A subset referenced an element outside `0..n`.
    InvalidSubset {
        element: usize,
        n: usize,
    },
    /// An exhaustive routine was asked to enumerate more than its cap allows.
    CapExceeded {
        n: usize,
        cap: usize,
    },
    InvalidParameter(String),
    /// An input broke a documented precondition of an online algorithm.
    ContractViolation(String),
    GenerationFailed(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSubset { element, n } => {
                write!(f, "element {element} is outside the ground set 0..{n}")
            }
            Error::CapExceeded { n, cap } => {
                write!(f, "size {n} exceeds the exhaustive cap {cap}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ContractViolation(msg) => write!(f, "contract violation: {msg}"),
            Error::GenerationFailed(msg) => write!(f, "generation failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
