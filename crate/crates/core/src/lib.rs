//! Long-range letter correlation analysis for symbolic sequences.
//!
//! Raw text is reduced to a 27-symbol alphabet ([`textnorm`]), turned into
//! per-letter random walks whose displacement function exposes correlations
//! ([`walk`]), compared against shuffled and synthetic controls
//! ([`nullmodels`]), profiled with Jensen–Shannon divergence against its
//! sampling-noise level ([`divergence`]), and decomposed by word-frequency
//! band ([`lexicon`]). [`cli`] wires everything into the `lettercorr` tool.

pub mod cli;
pub mod divergence;
pub mod error;
pub mod lexicon;
pub mod nullmodels;
mod regression;
pub mod textnorm;
pub mod walk;

pub use error::{Error, Result};
pub use textnorm::{normalize_reader, normalize_str, tokenize, NormalizedText, Token};
