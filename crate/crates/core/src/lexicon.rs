//! Rank-frequency lexicon, letter-share bands and the analyses built on them.
//!
//! Word types are ranked by decreasing count (ties broken alphabetically).
//! Bands are contiguous rank ranges that each contribute a fixed share of all
//! letters in the text; blanking every word outside one band and running the
//! adjacent-segment divergence on what remains shows which part of the
//! vocabulary drives the drift in letter composition.

use std::collections::HashMap;
use std::ops::Range;

use rayon::prelude::*;

use crate::divergence::{normalized_pair, segment_distribution, Alphabet};
use crate::error::{Error, Result};
use crate::regression::least_squares;
use crate::textnorm::{tokenize, NormalizedText, Token, SPACE};

#[derive(Debug, Clone, PartialEq)]
pub struct LexEntry {
    pub word: String,
    pub count: u64,
    pub length: usize,
    /// `count · length / total_letters`.
    pub letter_share: f64,
}

#[derive(Debug, Clone)]
pub struct FrequencyLexicon {
    entries: Vec<LexEntry>,
    index: HashMap<String, usize>,
    total_letters: u64,
    total_tokens: u64,
}

impl FrequencyLexicon {
    /// Entries in rank order; `entries()[0]` has rank 1.
    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_letters(&self) -> u64 {
        self.total_letters
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    /// 1-based rank of `word`.
    pub fn rank(&self, word: &str) -> Option<usize> {
        self.index.get(word).map(|i| i + 1)
    }

    pub fn get(&self, word: &str) -> Option<&LexEntry> {
        self.index.get(word).map(|&i| &self.entries[i])
    }
}

pub fn build_lexicon(tokens: &[Token]) -> Result<FrequencyLexicon> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for t in tokens {
        *counts.entry(t.text.as_str()).or_default() += 1;
    }
    FrequencyLexicon::from_counts(counts.into_iter().map(|(w, c)| (w.to_owned(), c)))
}

impl FrequencyLexicon {
    /// Builds a lexicon from precomputed `(word, count)` pairs. Words must be
    /// distinct; zero counts are dropped.
    pub fn from_counts<I: IntoIterator<Item = (String, u64)>>(counts: I) -> Result<Self> {
        let mut ranked: Vec<(String, u64)> = counts.into_iter().filter(|(_, c)| *c > 0).collect();
        if ranked.is_empty() {
            return Err(Error::EmptyText);
        }
        ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let total_letters: u64 = ranked.iter().map(|(w, c)| c * w.len() as u64).sum();
        let total_tokens: u64 = ranked.iter().map(|(_, c)| c).sum();
        let entries: Vec<LexEntry> = ranked
            .into_iter()
            .map(|(word, count)| LexEntry {
                length: word.len(),
                letter_share: (count * word.len() as u64) as f64 / total_letters as f64,
                word,
                count,
            })
            .collect();
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if index.insert(e.word.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate word type '{}'", e.word)));
            }
        }
        Ok(Self {
            entries,
            index,
            total_letters,
            total_tokens,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfFit {
    /// Slope of `ln f` against `ln rank`; about −1 for natural text.
    pub exponent: f64,
    pub intercept: f64,
    pub ranks_used: usize,
    pub rms_residual: f64,
}

/// Fits ranks `first..=last` (1-based, `last` clamped to the lexicon size).
pub fn zipf_fit(lex: &FrequencyLexicon, first: usize, last: usize) -> Result<ZipfFit> {
    let first = first.max(1);
    let last = last.min(lex.len());
    let found = if last >= first { last - first + 1 } else { 0 };
    if found < 10 {
        return Err(Error::InsufficientPoints { needed: 10, found });
    }
    let total = lex.total_tokens as f64;
    let pts: Vec<(f64, f64)> = (first..=last)
        .map(|r| ((r as f64).ln(), (lex.entries[r - 1].count as f64 / total).ln()))
        .collect();
    let line = least_squares(&pts);
    Ok(ZipfFit {
        exponent: line.slope,
        intercept: line.intercept,
        ranks_used: pts.len(),
        rms_residual: line.rms,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    /// 0-based index ranges into [`FrequencyLexicon::entries`].
    pub ranks: Range<usize>,
    pub letters: u64,
    pub letter_share: f64,
}

impl Band {
    pub fn word_types(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// 1-based inclusive rank bounds, `None` for an empty band.
    pub fn rank_bounds(&self) -> Option<(usize, usize)> {
        (!self.is_empty()).then(|| (self.ranks.start + 1, self.ranks.end))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandPartition {
    pub bands: Vec<Band>,
    pub target_share: f64,
    /// Some band ended up empty (lexicon too small or too skewed).
    pub degenerate: bool,
}

pub const DEFAULT_BAND_COUNT: usize = 5;
pub const DEFAULT_TARGET_SHARE: f64 = 0.2;

/// Greedy split in rank order: band `b` closes at the first word whose
/// cumulative letter share reaches `(b+1)·target`; the last band takes the rest.
pub fn partition_bands(lex: &FrequencyLexicon, band_count: usize, target_share: f64) -> Result<BandPartition> {
    if lex.is_empty() {
        return Err(Error::EmptyText);
    }
    if band_count == 0 {
        return Err(Error::InvalidParameter("band count must be at least 1".into()));
    }
    if !(target_share > 0.0 && target_share <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target share must be in (0, 1], got {target_share}"
        )));
    }
    let total = lex.total_letters as f64;
    // Relative slack so that exact-share boundaries are not lost to rounding.
    let threshold = |b: usize| (b + 1) as f64 * target_share * total * (1.0 - 1e-12);
    let mut bounds = Vec::with_capacity(band_count);
    let mut start = 0;
    let mut cum = 0u64;
    for (i, e) in lex.entries.iter().enumerate() {
        cum += e.count * e.length as u64;
        while bounds.len() < band_count - 1 && cum as f64 >= threshold(bounds.len()) {
            bounds.push(start..i + 1);
            start = i + 1;
        }
    }
    while bounds.len() < band_count - 1 {
        bounds.push(start..start);
    }
    bounds.push(start..lex.len());
    let bands: Vec<Band> = bounds
        .into_iter()
        .map(|ranks| {
            let letters: u64 = lex.entries[ranks.clone()]
                .iter()
                .map(|e| e.count * e.length as u64)
                .sum();
            Band {
                ranks,
                letters,
                letter_share: letters as f64 / total,
            }
        })
        .collect();
    let degenerate = bands.iter().any(Band::is_empty);
    Ok(BandPartition {
        bands,
        target_share,
        degenerate,
    })
}

fn token_ranks(tokens: &[Token], lex: &FrequencyLexicon) -> Vec<Option<usize>> {
    tokens.iter().map(|t| lex.index.get(&t.text).copied()).collect()
}

fn filter_by_ranks(
    text: &NormalizedText,
    tokens: &[Token],
    ranks: &[Option<usize>],
    keep: &Range<usize>,
) -> NormalizedText {
    let mut out = text.symbols().to_vec();
    for (tok, rank) in tokens.iter().zip(ranks) {
        if !rank.is_some_and(|r| keep.contains(&r)) {
            out[tok.start..tok.end()].fill(SPACE);
        }
    }
    NormalizedText::from_symbols_unchecked(out)
}

/// Replaces every token outside `band` by spaces, keeping offsets.
pub fn band_filter_text(text: &NormalizedText, lex: &FrequencyLexicon, band: &Band) -> NormalizedText {
    let tokens = tokenize(text);
    let ranks = token_ranks(&tokens, lex);
    filter_by_ranks(text, &tokens, &ranks, &band.ranks)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandJsdRow {
    pub band: usize,
    pub word_types: usize,
    pub letter_share: f64,
    /// Mean over segment pairs of JSD / fluctuation level.
    pub mean_normalized: f64,
    /// Mean letters counted per segment.
    pub mean_effective_n: f64,
    pub pairs_used: usize,
    pub pairs_skipped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandJsdReport {
    pub segment_length: usize,
    pub rows: Vec<BandJsdRow>,
}

impl BandJsdReport {
    /// Row with the largest mean normalized divergence.
    pub fn strongest(&self) -> Option<&BandJsdRow> {
        self.rows
            .iter()
            .filter(|r| r.pairs_used > 0)
            .max_by(|a, b| a.mean_normalized.total_cmp(&b.mean_normalized))
    }
}

pub const DEFAULT_BAND_SEGMENT: usize = 100_000;

/// Letters-only divergence between the non-overlapping segment pairs
/// `[s, s+L)`, `[s+L, s+2L)` for `s = 0, 2L, 4L, …`, computed separately on
/// each band-filtered text. Segment bounds are in original text coordinates;
/// the trial counts are the letters surviving the filter.
pub fn band_jsd(
    text: &NormalizedText,
    lex: &FrequencyLexicon,
    partition: &BandPartition,
    segment_length: usize,
) -> Result<BandJsdReport> {
    if segment_length == 0 {
        return Err(Error::InvalidParameter("segment length must be positive".into()));
    }
    let needed = segment_length.saturating_mul(2);
    if text.len() < needed {
        return Err(Error::TextTooShort {
            len: text.len(),
            needed,
        });
    }
    let tokens = tokenize(text);
    let ranks = token_ranks(&tokens, lex);
    let rows = partition
        .bands
        .par_iter()
        .enumerate()
        .map(|(i, band)| {
            let filtered = filter_by_ranks(text, &tokens, &ranks, &band.ranks);
            let mut sum = 0.0;
            let mut trials = 0u64;
            let (mut used, mut skipped) = (0, 0);
            let mut s = 0;
            while s + needed <= filtered.len() {
                let p = segment_distribution(&filtered, s, segment_length, Alphabet::LettersOnly)?;
                let q = segment_distribution(&filtered, s + segment_length, segment_length, Alphabet::LettersOnly)?;
                match normalized_pair(&p, &q)? {
                    Some(pair) => {
                        sum += pair.normalized;
                        trials += pair.trials.0 + pair.trials.1;
                        used += 1;
                    }
                    None => skipped += 1,
                }
                s += needed;
            }
            let mean = |x: f64, n: usize| if n == 0 { f64::NAN } else { x / n as f64 };
            Ok(BandJsdRow {
                band: i + 1,
                word_types: band.word_types(),
                letter_share: band.letter_share,
                mean_normalized: mean(sum, used),
                mean_effective_n: mean(trials as f64, 2 * used),
                pairs_used: used,
                pairs_skipped: skipped,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BandJsdReport {
        segment_length,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordHalves {
    pub word: String,
    pub first: u64,
    pub second: u64,
    /// Count per token in each half.
    pub freq_first: f64,
    pub freq_second: f64,
    /// `freq_second / freq_first`; `None` when the word is absent from the first half.
    pub ratio: Option<f64>,
}

impl WordHalves {
    pub fn relative_change(&self) -> Option<f64> {
        self.ratio.map(|r| r - 1.0)
    }
}

#[derive(Debug, Clone)]
pub struct HalvesComparison {
    /// Symbol offset of the split (a token boundary).
    pub split: usize,
    pub tokens_first: u64,
    pub tokens_second: u64,
    first: HashMap<String, u64>,
    second: HashMap<String, u64>,
}

impl HalvesComparison {
    pub fn counts(&self, word: &str) -> (u64, u64) {
        (
            self.first.get(word).copied().unwrap_or(0),
            self.second.get(word).copied().unwrap_or(0),
        )
    }

    pub fn row(&self, word: &str) -> WordHalves {
        let (a, b) = self.counts(word);
        let fa = a as f64 / self.tokens_first.max(1) as f64;
        let fb = b as f64 / self.tokens_second.max(1) as f64;
        WordHalves {
            word: word.to_owned(),
            first: a,
            second: b,
            freq_first: fa,
            freq_second: fb,
            ratio: (a > 0).then(|| fb / fa),
        }
    }

    /// `count(numerator) / count(denominator)` within each half.
    pub fn count_ratio(&self, numerator: &str, denominator: &str) -> (Option<f64>, Option<f64>) {
        let (n1, n2) = self.counts(numerator);
        let (d1, d2) = self.counts(denominator);
        let r = |n: u64, d: u64| (d > 0).then(|| n as f64 / d as f64);
        (r(n1, d1), r(n2, d2))
    }

    /// Every word type, most frequent overall first (ties alphabetical).
    pub fn rows(&self) -> Vec<WordHalves> {
        let mut words: Vec<(&String, u64)> = self
            .first
            .keys()
            .chain(self.second.keys())
            .map(|w| {
                let (a, b) = self.counts(w);
                (w, a + b)
            })
            .collect();
        words.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        words.dedup_by(|a, b| a.0 == b.0);
        words.into_iter().map(|(w, _)| self.row(w)).collect()
    }
}

/// Split offset: the midpoint symbol, moved to the nearer edge of the token
/// it falls inside (the token start on a tie).
pub fn half_split(tokens: &[Token], len: usize) -> usize {
    let mid = len / 2;
    match tokens.iter().find(|t| t.start < mid && mid < t.end()) {
        Some(t) if t.end() - mid < mid - t.start => t.end(),
        Some(t) => t.start,
        None => mid,
    }
}

pub fn compare_halves(text: &NormalizedText) -> Result<HalvesComparison> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(Error::EmptyText);
    }
    let split = half_split(&tokens, text.len());
    let mut first: HashMap<String, u64> = HashMap::new();
    let mut second: HashMap<String, u64> = HashMap::new();
    let (mut n1, mut n2) = (0, 0);
    for t in tokens {
        if t.start < split {
            n1 += 1;
            *first.entry(t.text).or_default() += 1;
        } else {
            n2 += 1;
            *second.entry(t.text).or_default() += 1;
        }
    }
    Ok(HalvesComparison {
        split,
        tokens_first: n1,
        tokens_second: n2,
        first,
        second,
    })
}

/// Poisson estimate of how much a letter's count varies across a small set
/// of content words.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContentWordEstimate {
    /// Expected occurrences of the letter among the content-word letters.
    pub expected: f64,
    pub standard_deviation: f64,
    /// `standard_deviation / expected`; `None` when nothing is expected.
    pub relative_sd: Option<f64>,
}

pub fn content_word_variance_model(
    word_count: f64,
    avg_word_length: f64,
    letter_prob: f64,
) -> Result<ContentWordEstimate> {
    for (name, v) in [
        ("word count", word_count),
        ("average word length", avg_word_length),
        ("letter probability", letter_prob),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
        }
    }
    if letter_prob > 1.0 {
        return Err(Error::InvalidParameter(format!(
            "letter probability must be at most 1, got {letter_prob}"
        )));
    }
    let expected = word_count * avg_word_length * letter_prob;
    let sd = expected.sqrt();
    Ok(ContentWordEstimate {
        expected,
        standard_deviation: sd,
        relative_sd: (expected > 0.0).then(|| sd / expected),
    })
}
