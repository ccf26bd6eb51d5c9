//! Entropy, Jensen–Shannon divergence and its finite-sample fluctuation level.
//!
//! All logarithms are natural. Entropy carries the conventional minus sign,
//! `H(p) = −Σ p ln p`, so that `D(p, q) = H((p+q)/2) − (H(p)+H(q))/2 ≥ 0`.
//!
//! Two samples of `N` trials each drawn from the same law over `n` outcomes
//! give, to leading order in `1/N`, an expected divergence of `(n−1)/(4N)`.
//! Profiles report divergence in units of that level, so values near 1 mean
//! "indistinguishable from sampling noise".

use log::debug;

use crate::error::{Error, Result};
use crate::textnorm::{NormalizedText, ALPHABET_SIZE, SPACE};

/// Counts over a fixed alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolDistribution {
    counts: Vec<u64>,
    total: u64,
}

impl SymbolDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of trials `N`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// Symbols with a nonzero count.
    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn freqs(&self) -> Vec<f64> {
        let n = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Symbols with a nonzero count in `p` or `q`.
pub fn pooled_support(p: &SymbolDistribution, q: &SymbolDistribution) -> usize {
    p.counts
        .iter()
        .zip(&q.counts)
        .filter(|(a, b)| **a + **b > 0)
        .count()
}

pub fn entropy(d: &SymbolDistribution) -> Result<f64> {
    if d.total == 0 {
        return Err(Error::EmptyDistribution);
    }
    Ok(entropy_of(&d.freqs()))
}

pub(crate) fn entropy_of(freqs: &[f64]) -> f64 {
    -freqs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Equal-weight Jensen–Shannon divergence, in nats.
pub fn jsd(p: &SymbolDistribution, q: &SymbolDistribution) -> Result<f64> {
    if p.alphabet_size() != q.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            left: p.alphabet_size(),
            right: q.alphabet_size(),
        });
    }
    if p.total == 0 || q.total == 0 {
        return Err(Error::EmptyDistribution);
    }
    Ok(jsd_of(&p.freqs(), &q.freqs()))
}

/// Evaluated as `½ Σ [p ln(p/m) + q ln(q/m)]`, `m = (p+q)/2`. Each term is
/// symmetric in `(p, q)` and vanishes exactly when `p = q`.
pub(crate) fn jsd_of(p: &[f64], q: &[f64]) -> f64 {
    let kl_term = |x: f64, m: f64| if x > 0.0 { x * (x / m).ln() } else { 0.0 };
    let d: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let m = 0.5 * (a + b);
            0.5 * (kl_term(a, m) + kl_term(b, m))
        })
        .sum();
    d.max(0.0)
}

/// Expected divergence between two same-law samples of `trials` each, over
/// `alphabet` outcomes: `(n−1)/(4N)`.
pub fn fluctuation_level(alphabet: usize, trials: u64) -> Result<f64> {
    fluctuation_level_unequal(alphabet, trials, trials)
}

/// `(n−1)/8 · (1/N₁ + 1/N₂)`; equals `(n−1)/(4N)` when `N₁ = N₂`.
pub fn fluctuation_level_unequal(alphabet: usize, trials_p: u64, trials_q: u64) -> Result<f64> {
    if alphabet < 2 {
        return Err(Error::InvalidParameter(format!(
            "fluctuation level needs at least 2 outcomes, got {alphabet}"
        )));
    }
    if trials_p == 0 || trials_q == 0 {
        return Err(Error::EmptyDistribution);
    }
    let dof = (alphabet - 1) as f64;
    Ok(dof / 8.0 * (1.0 / trials_p as f64 + 1.0 / trials_q as f64))
}

/// Which symbols a segment distribution counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alphabet {
    /// All 27 symbols.
    #[default]
    WithSpace,
    /// Letters only; spaces are neither outcomes nor trials.
    LettersOnly,
}

impl Alphabet {
    pub fn size(self) -> usize {
        match self {
            Alphabet::WithSpace => ALPHABET_SIZE,
            Alphabet::LettersOnly => ALPHABET_SIZE - 1,
        }
    }

    #[inline]
    fn counts(self, symbol: u8) -> bool {
        self == Alphabet::WithSpace || symbol != SPACE
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::WithSpace => "with-space",
            Alphabet::LettersOnly => "letters-only",
        }
    }
}

pub fn segment_distribution(
    text: &NormalizedText,
    start: usize,
    length: usize,
    alphabet: Alphabet,
) -> Result<SymbolDistribution> {
    let end = start.saturating_add(length);
    if length == 0 || end > text.len() {
        return Err(Error::SliceOutOfRange {
            start,
            end,
            len: text.len(),
        });
    }
    let mut counts = vec![0u64; alphabet.size()];
    for &s in &text.symbols()[start..end] {
        if alphabet.counts(s) {
            counts[s as usize] += 1;
        }
    }
    Ok(SymbolDistribution::from_counts(counts))
}

/// Divergence between `p` and `q` in units of their fluctuation level.
///
/// The alphabet size entering the level is the pooled support of the pair,
/// floored at 2. `None` if either side has no trials.
pub fn normalized_pair(p: &SymbolDistribution, q: &SymbolDistribution) -> Result<Option<PairDivergence>> {
    if p.total == 0 || q.total == 0 {
        return Ok(None);
    }
    let raw = jsd(p, q)?;
    let support = pooled_support(p, q);
    let fluct = fluctuation_level_unequal(support.max(2), p.total, q.total)?;
    Ok(Some(PairDivergence {
        raw,
        fluct,
        normalized: raw / fluct,
        trials: (p.total, q.total),
        support,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDivergence {
    pub raw: f64,
    pub fluct: f64,
    pub normalized: f64,
    pub trials: (u64, u64),
    /// Effective alphabet size (pooled support).
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsdEntry {
    /// Boundary between the two segments.
    pub position: usize,
    pub raw: f64,
    pub fluct: f64,
    pub normalized: f64,
    /// Trials counted on each side of the boundary.
    pub trials: (u64, u64),
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JsdProfile {
    pub segment_length: usize,
    pub step: usize,
    pub alphabet: Alphabet,
    pub entries: Vec<JsdEntry>,
    /// Boundaries skipped because one side had no counted symbols.
    pub skipped: usize,
}

impl JsdProfile {
    pub fn mean_normalized(&self) -> f64 {
        if self.entries.is_empty() {
            return f64::NAN;
        }
        self.entries.iter().map(|e| e.normalized).sum::<f64>() / self.entries.len() as f64
    }

    pub fn fraction_above(&self, level: f64) -> f64 {
        if self.entries.is_empty() {
            return f64::NAN;
        }
        self.entries.iter().filter(|e| e.normalized > level).count() as f64 / self.entries.len() as f64
    }

    /// Entry with the largest normalized divergence.
    pub fn peak(&self) -> Option<&JsdEntry> {
        self.entries
            .iter()
            .max_by(|a, b| a.normalized.total_cmp(&b.normalized))
    }
}

pub const fn default_step(segment_length: usize) -> usize {
    let s = segment_length / 10;
    if s == 0 {
        1
    } else {
        s
    }
}

/// Divergence between adjacent segments `[b−L, b)` and `[b, b+L)` for
/// boundaries `b = L, L+step, …, ≤ N−L`.
pub fn jsd_profile(
    text: &NormalizedText,
    segment_length: usize,
    step: usize,
    alphabet: Alphabet,
) -> Result<JsdProfile> {
    if segment_length == 0 || step == 0 {
        return Err(Error::InvalidParameter(
            "segment length and step must be positive".into(),
        ));
    }
    let needed = segment_length.saturating_mul(2);
    if text.len() < needed {
        return Err(Error::TextTooShort {
            len: text.len(),
            needed,
        });
    }
    let sym = text.symbols();
    let l = segment_length;
    let mut left = segment_distribution(text, 0, l, alphabet)?.counts;
    let mut right = segment_distribution(text, l, l, alphabet)?.counts;
    let mut entries = Vec::new();
    let mut skipped = 0;
    let mut b = l;
    loop {
        let p = SymbolDistribution::from_counts(left.clone());
        let q = SymbolDistribution::from_counts(right.clone());
        match normalized_pair(&p, &q)? {
            Some(pair) => entries.push(JsdEntry {
                position: b,
                raw: pair.raw,
                fluct: pair.fluct,
                normalized: pair.normalized,
                trials: pair.trials,
                support: pair.support,
            }),
            None => skipped += 1,
        }
        let next = b + step;
        if next + l > sym.len() {
            break;
        }
        if step < l {
            for j in 0..step {
                let leaving = sym[b - l + j];
                let crossing = sym[b + j];
                let entering = sym[b + l + j];
                if alphabet.counts(leaving) {
                    left[leaving as usize] -= 1;
                }
                if alphabet.counts(crossing) {
                    left[crossing as usize] += 1;
                    right[crossing as usize] -= 1;
                }
                if alphabet.counts(entering) {
                    right[entering as usize] += 1;
                }
            }
        } else {
            left = segment_distribution(text, next - l, l, alphabet)?.counts;
            right = segment_distribution(text, next, l, alphabet)?.counts;
        }
        b = next;
    }
    if skipped > 0 {
        debug!("jsd profile skipped {skipped} boundaries with an empty side");
    }
    Ok(JsdProfile {
        segment_length,
        step,
        alphabet,
        entries,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textnorm::normalize_str;
    use proptest::prelude::*;

    fn dist(c: &[u64]) -> SymbolDistribution {
        SymbolDistribution::from_counts(c.to_vec())
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&dist(&[5, 0, 0])).unwrap(), 0.0);
        assert!((entropy(&dist(&[3, 3])).unwrap() - 2f64.ln()).abs() < 1e-15);
        let uniform = dist(&[1; 27]);
        assert!((entropy(&uniform).unwrap() - 27f64.ln()).abs() < 1e-14);
        assert!((entropy(&uniform).unwrap() - 3.2958).abs() < 1e-4);
        assert!(matches!(entropy(&dist(&[0, 0])), Err(Error::EmptyDistribution)));
    }

    #[test]
    fn jsd_examples() {
        assert_eq!(jsd(&dist(&[2, 3, 5]), &dist(&[4, 6, 10])).unwrap(), 0.0);
        // H(r) = ln 2, H(p) = H(q) = 0.
        assert!((jsd(&dist(&[1, 0]), &dist(&[0, 1])).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!(matches!(
            jsd(&dist(&[1, 0]), &dist(&[1, 0, 0])),
            Err(Error::AlphabetMismatch { left: 2, right: 3 })
        ));
        assert!(jsd(&dist(&[0, 0]), &dist(&[1, 0])).is_err());
    }

    #[test]
    fn fluctuation_examples() {
        assert!((fluctuation_level(27, 1000).unwrap() - 0.0065).abs() < 1e-15);
        assert_eq!(fluctuation_level(2, 250).unwrap(), 1.0 / 1000.0);
        assert_eq!(
            fluctuation_level_unequal(10, 400, 400).unwrap(),
            fluctuation_level(10, 400).unwrap()
        );
        assert!((fluctuation_level_unequal(3, 100, 300).unwrap() - 0.25 * (0.01 + 1.0 / 300.0)).abs() < 1e-15);
        assert!(fluctuation_level(1, 100).is_err());
        assert!(fluctuation_level(5, 0).is_err());
    }

    #[test]
    fn segment_examples() {
        let t = normalize_str("aab ");
        let d = segment_distribution(&t, 0, 4, Alphabet::LettersOnly).unwrap();
        assert_eq!((d.counts()[0], d.counts()[1], d.total()), (2, 1, 3));
        assert_eq!(d.alphabet_size(), 26);
        let d = segment_distribution(&t, 0, 4, Alphabet::WithSpace).unwrap();
        assert_eq!(d.total(), 4);
        assert!(segment_distribution(&t, 2, 0, Alphabet::WithSpace).is_err());
        assert!(segment_distribution(&t, 2, 3, Alphabet::WithSpace).is_err());
    }

    #[test]
    fn profile_of_single_symbol_text_is_flat_zero() {
        let t = normalize_str(&"x".repeat(1000));
        let prof = jsd_profile(&t, 100, 10, Alphabet::WithSpace).unwrap();
        assert_eq!(prof.entries.len(), 81);
        assert!(prof.entries.iter().all(|e| e.raw == 0.0 && e.fluct > 0.0));
    }

    #[test]
    fn profile_positions_and_errors() {
        let t = normalize_str(&"ab cd ".repeat(100));
        let prof = jsd_profile(&t, 100, 30, Alphabet::WithSpace).unwrap();
        let pos: Vec<_> = prof.entries.iter().map(|e| e.position).collect();
        assert_eq!(pos, vec![100, 130, 160, 190, 220, 250, 280, 310, 340, 370, 400, 430, 460, 490]);
        assert!(matches!(
            jsd_profile(&t, 301, 1, Alphabet::WithSpace),
            Err(Error::TextTooShort { .. })
        ));
        assert!(jsd_profile(&t, 10, 0, Alphabet::WithSpace).is_err());
    }

    #[test]
    fn sliding_counts_match_recount() {
        let t = normalize_str(&"it was the best of times it was the worst of times ".repeat(40));
        for alphabet in [Alphabet::WithSpace, Alphabet::LettersOnly] {
            let prof = jsd_profile(&t, 257, 13, alphabet).unwrap();
            for e in &prof.entries {
                let p = segment_distribution(&t, e.position - 257, 257, alphabet).unwrap();
                let q = segment_distribution(&t, e.position, 257, alphabet).unwrap();
                assert_eq!(e.trials, (p.total(), q.total()));
                assert_eq!(e.raw, jsd(&p, &q).unwrap());
            }
        }
    }

    #[test]
    fn letters_only_skips_blank_segments() {
        let mut s = "ab".repeat(50);
        s.push_str(&" ".repeat(1));
        let mut sym = normalize_str(&s).into_symbols();
        sym.extend(std::iter::repeat_n(SPACE, 200));
        let t = NormalizedText::from_symbols(sym).unwrap();
        let prof = jsd_profile(&t, 100, 100, Alphabet::LettersOnly).unwrap();
        assert_eq!(prof.skipped, 2);
        assert_eq!(prof.entries.len(), 0);
    }

    #[test]
    fn junction_is_the_peak() {
        let mut s = "abab".repeat(500);
        s.push_str(&"cdcd".repeat(500));
        let t = normalize_str(&s);
        let prof = jsd_profile(&t, 400, 400, Alphabet::WithSpace).unwrap();
        assert_eq!(prof.peak().unwrap().position, 2000);
    }

    fn probs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..30).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u32..1000, n),
                proptest::collection::vec(0u32..1000, n),
            )
                .prop_filter_map("nonzero", |(a, b)| {
                    let sa: u32 = a.iter().sum();
                    let sb: u32 = b.iter().sum();
                    (sa > 0 && sb > 0).then(|| {
                        (
                            a.iter().map(|&x| x as f64 / sa as f64).collect(),
                            b.iter().map(|&x| x as f64 / sb as f64).collect(),
                        )
                    })
                })
        })
    }

    proptest! {
        #[test]
        fn jsd_properties((p, q) in probs()) {
            let d = jsd_of(&p, &q);
            prop_assert!(d >= 0.0);
            prop_assert!(d <= 2f64.ln() + 1e-12);
            prop_assert_eq!(d.to_bits(), jsd_of(&q, &p).to_bits());
            prop_assert_eq!(jsd_of(&p, &p), 0.0);
            if p.iter().zip(&q).any(|(a, b)| (a - b).abs() > 1e-9) {
                prop_assert!(d > 0.0);
            }
            // Entropy-difference form.
            let m: Vec<f64> = p.iter().zip(&q).map(|(a, b)| 0.5 * (a + b)).collect();
            let via_entropy = entropy_of(&m) - 0.5 * (entropy_of(&p) + entropy_of(&q));
            prop_assert!((d - via_entropy).abs() < 1e-12);
        }
    }
}
