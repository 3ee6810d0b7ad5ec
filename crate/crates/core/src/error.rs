use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),

    #[error("modulus {0} is too large (table-based discrete logs require p < 2^20)")]
    ModulusTooLarge(u64),

    #[error("zero has no discrete logarithm")]
    ZeroHasNoLog,

    #[error("index d = {d} does not satisfy the requirement for p = {p}: {reason}")]
    BadIndex {
        p: u32,
        d: u32,
        reason: &'static str,
    },

    #[error("sets live over different moduli ({left} vs {right})")]
    MixedModulus { left: u32, right: u32 },

    #[error("shift {0} repeated (shifts must be pairwise distinct)")]
    DuplicateShift(u32),

    #[error("shift list is invalid: {0}")]
    BadShifts(String),

    #[error("companion set B must be nonempty")]
    EmptyB,

    #[error("set must not be {{0}} (or empty)")]
    ZeroSetOnly,

    #[error("polynomial of degree {degree} needs p > degree (got p = {p})")]
    DegreeTooLarge { degree: usize, p: u32 },

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("character index j = {j} out of range for order context d = {d}")]
    BadCharacter { d: u32, j: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("witness failed re-verification: {0}")]
    CorruptWitness(String),

    #[error("cache I/O at {path}: {source}")]
    CacheIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
