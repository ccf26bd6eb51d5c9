use std::io;

use thiserror::Error;

/// Errors produced by the analysis modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("read failed at byte offset {offset}: {source}")]
    Io {
        offset: u64,
        #[source]
        source: io::Error,
    },

    #[error("empty text")]
    EmptyText,

    #[error("window length k={k} exceeds N/4 = {limit} (N = {len})")]
    KOutOfRange { k: usize, limit: usize, len: usize },

    #[error("k grid must be strictly increasing with every k >= 1 (offending k={0})")]
    InvalidKGrid(usize),

    #[error("need at least {needed} usable points for a fit, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("invalid symbol code {0} (expected 0..=26)")]
    InvalidSymbol(u8),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("alphabet mismatch: {left} vs {right} symbols")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("empty distribution (no trials)")]
    EmptyDistribution,

    #[error("slice [{start}, {end}) is outside the text (length {len}) or empty")]
    SliceOutOfRange { start: usize, end: usize, len: usize },

    #[error("text of length {len} is shorter than the required {needed} symbols")]
    TextTooShort { len: usize, needed: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
