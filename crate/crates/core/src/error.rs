use thiserror::Error;

use crate::arith::ArithError;
use crate::modpoly::ModPolyError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    ModPoly(#[from] ModPolyError),
    #[error("supersingular locus enumeration incomplete: {0}")]
    EnumerationIncomplete(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("objects belong to different supersingular loci")]
    LocusMismatch,
    #[error("insufficient data for a rate fit: {usable} usable points ({zeros} exact zeros excluded), need 10")]
    InsufficientData { usable: usize, zeros: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// The prime whose modular polynomial is missing, if that is the cause.
    pub fn missing_level(&self) -> Option<u64> {
        match self {
            Error::ModPoly(ModPolyError::Missing(ell)) => Some(*ell),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
