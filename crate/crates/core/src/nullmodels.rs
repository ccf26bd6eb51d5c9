//! Surrogate sequences that keep selected statistics of a text and destroy
//! the rest, plus a synthetic two-regime Bernoulli generator.
//!
//! All randomness comes from ChaCha8 seeded with the caller's 64-bit seed.
//! Each generator draws from its own ChaCha stream, so the same seed gives
//! independent, stable draws per operation.

use rand::distr::{Bernoulli, Distribution};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::textnorm::{tokenize, NormalizedText, SPACE};

/// Stream identifiers; append new ones, never renumber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    WindowSample = 1,
    WindowPermute = 2,
    FullLetter = 3,
    FullWord = 4,
    TwoRegime = 5,
}

pub fn rng_for(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShuffleMode {
    /// Position `i` is redrawn, with replacement, from a window of `window`
    /// symbols centred on `i`.
    WindowSample { window: usize },
    /// Disjoint blocks of `window` symbols, each permuted independently.
    WindowPermute { window: usize },
    FullLetter,
    FullWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShuffleSpec {
    pub mode: ShuffleMode,
    pub seed: u64,
}

pub fn shuffle(text: &NormalizedText, spec: &ShuffleSpec) -> Result<NormalizedText> {
    match spec.mode {
        ShuffleMode::WindowSample { window } => window_shuffle(text, window, spec.seed),
        ShuffleMode::WindowPermute { window } => window_permute(text, window, spec.seed),
        ShuffleMode::FullLetter => full_letter_shuffle(text, spec.seed),
        ShuffleMode::FullWord => full_word_shuffle(text, spec.seed),
    }
}

/// Source window for output position `i`: `[i − ⌊n/2⌋ + 1, i + ⌈n/2⌉)`
/// clamped to the text. Always contains `i`.
pub fn sample_window(i: usize, window: usize, len: usize) -> (usize, usize) {
    let lo = (i + 1).saturating_sub(window / 2);
    let hi = (i + window.div_ceil(2)).min(len);
    (lo, hi)
}

/// Windows wider than the text are clamped, so `window >= 2·len` draws every
/// position from the whole text.
pub fn window_shuffle(text: &NormalizedText, window: usize, seed: u64) -> Result<NormalizedText> {
    if window < 2 {
        return Err(Error::InvalidParameter(format!(
            "sampling window must be at least 2 symbols, got {window}"
        )));
    }
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let src = text.symbols();
    let mut rng = rng_for(seed, Stream::WindowSample);
    let out = (0..src.len())
        .map(|i| {
            let (lo, hi) = sample_window(i, window, src.len());
            src[rng.random_range(lo..hi)]
        })
        .collect();
    Ok(NormalizedText::from_symbols_unchecked(out))
}

pub fn window_permute(text: &NormalizedText, window: usize, seed: u64) -> Result<NormalizedText> {
    if window == 0 {
        return Err(Error::InvalidParameter("permutation block must be at least 1 symbol".into()));
    }
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut out = text.symbols().to_vec();
    let mut rng = rng_for(seed, Stream::WindowPermute);
    for block in out.chunks_mut(window) {
        block.shuffle(&mut rng);
    }
    Ok(NormalizedText::from_symbols_unchecked(out))
}

pub fn full_letter_shuffle(text: &NormalizedText, seed: u64) -> Result<NormalizedText> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut out = text.symbols().to_vec();
    out.shuffle(&mut rng_for(seed, Stream::FullLetter));
    Ok(NormalizedText::from_symbols_unchecked(out))
}

/// Permutes the tokens and rejoins them with single spaces (no leading or
/// trailing space).
pub fn full_word_shuffle(text: &NormalizedText, seed: u64) -> Result<NormalizedText> {
    let mut tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(Error::EmptyText);
    }
    tokens.shuffle(&mut rng_for(seed, Stream::FullWord));
    let src = text.symbols();
    let mut out = Vec::with_capacity(text.len());
    for (i, tok) in tokens.iter().enumerate() {
        if i > 0 {
            out.push(SPACE);
        }
        out.extend_from_slice(&src[tok.start..tok.end()]);
    }
    Ok(NormalizedText::from_symbols_unchecked(out))
}

/// Bernoulli sequence over `{'a', space}` whose success probability switches
/// inside one burst.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoRegimeSpec {
    pub total_length: usize,
    pub base_p: f64,
    pub burst_p: f64,
    /// `None` centres the burst in the sequence.
    pub burst_start: Option<usize>,
    pub burst_length: usize,
    pub seed: u64,
}

impl Default for TwoRegimeSpec {
    fn default() -> Self {
        Self {
            total_length: 1_200_000,
            base_p: 0.062,
            burst_p: 0.1054,
            burst_start: None,
            burst_length: 6250,
            seed: 0,
        }
    }
}

impl TwoRegimeSpec {
    pub fn resolved_burst_start(&self) -> usize {
        self.burst_start
            .unwrap_or_else(|| self.total_length.saturating_sub(self.burst_length) / 2)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("base p", self.base_p), ("burst p", self.burst_p)] {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must be in (0, 1), got {p}")));
            }
        }
        if self.total_length == 0 {
            return Err(Error::InvalidParameter("total length must be positive".into()));
        }
        let start = self.resolved_burst_start();
        if start + self.burst_length > self.total_length {
            return Err(Error::InvalidParameter(format!(
                "burst [{start}, {}) does not fit in {} symbols",
                start + self.burst_length,
                self.total_length
            )));
        }
        Ok(())
    }
}

pub fn two_regime_sequence(spec: &TwoRegimeSpec) -> Result<NormalizedText> {
    spec.validate()?;
    let base = Bernoulli::new(spec.base_p).expect("validated");
    let burst = Bernoulli::new(spec.burst_p).expect("validated");
    let start = spec.resolved_burst_start();
    let end = start + spec.burst_length;
    let mut rng = rng_for(spec.seed, Stream::TwoRegime);
    let out = (0..spec.total_length)
        .map(|i| {
            let dist = if (start..end).contains(&i) { &burst } else { &base };
            if dist.sample(&mut rng) {
                0
            } else {
                SPACE
            }
        })
        .collect();
    Ok(NormalizedText::from_symbols_unchecked(out))
}
