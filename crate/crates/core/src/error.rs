use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("base-set size {0} is out of range (supported: 3..=8)")]
    BaseSetSize(usize),

    #[error("invalid elementary triplet ({i},{j}|{k:#b}) for n={n}")]
    InvalidTriplet { i: usize, j: usize, k: u32, n: usize },

    #[error("subset {mask:#b} has fewer than two elements")]
    SubsetTooSmall { mask: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix has rank {found}, expected {expected}")]
    Rank { expected: usize, found: usize },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("ray is not extremal in the cone")]
    NotExtremal,

    #[error("ray violates row {row} of the cone")]
    Infeasible { row: usize },

    #[error("row {row} is tight at the ray and cannot be the excluded row")]
    SupportRow { row: usize },

    #[error("cone is not pointed")]
    NotPointed,

    #[error("insertion order is not a permutation of 0..{0}")]
    BadOrder(usize),

    #[error("capture-recapture estimate is undefined: no overlap between probe and pool")]
    NoOverlap,

    #[error("malformed input at line {line}: {msg}")]
    Malformed { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn malformed(line: usize, msg: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            msg: msg.into(),
        }
    }
}
