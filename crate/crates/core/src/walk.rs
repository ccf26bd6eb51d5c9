//! Random-walk displacement function of per-letter indicator sequences.
//!
//! Each symbol of the text becomes a step of 1 (the chosen letter) or 0
//! (anything else). `F(k)` is the variance of the length-`k` window sums over
//! every starting position. For an uncorrelated series `F(k) = k·p(1−p)`;
//! persistent correlations make it grow faster, `F(k) ∼ k^α` with `α > 1`.
//!
//! Window sums come from one prefix-sum array. Moments are accumulated in
//! integers and combined as `(M·Σy² − (Σy)²) / M²`, so the result is exact up
//! to a single final rounding, independent of evaluation order.

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::regression::least_squares;
use crate::textnorm::{NormalizedText, SPACE};

/// Binary series marking the positions of one symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorSeries {
    bits: Vec<u8>,
    letter: u8,
    ones: usize,
}

impl IndicatorSeries {
    /// Wraps an arbitrary 0/1 series. `letter` is only metadata.
    pub fn from_bits(bits: Vec<u8>, letter: u8) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyText);
        }
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidParameter(format!("indicator value {b} is not 0 or 1")));
        }
        let ones = bits.iter().filter(|&&b| b == 1).count();
        Ok(Self { bits, letter, ones })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn letter(&self) -> u8 {
        self.letter
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.ones
    }

    /// Fraction of ones.
    pub fn mean(&self) -> f64 {
        self.ones as f64 / self.bits.len() as f64
    }

    /// The 0↔1 relabelled series.
    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|&b| 1 - b).collect(),
            letter: self.letter,
            ones: self.bits.len() - self.ones,
        }
    }
}

pub fn indicator(text: &NormalizedText, letter: u8) -> Result<IndicatorSeries> {
    if letter > SPACE {
        return Err(Error::InvalidSymbol(letter));
    }
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let bits: Vec<u8> = text.symbols().iter().map(|&s| u8::from(s == letter)).collect();
    let ones = bits.iter().filter(|&&b| b == 1).count();
    Ok(IndicatorSeries { bits, letter, ones })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub k: usize,
    pub f: f64,
}

/// Sampled `(k, F(k))` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementCurve {
    /// Source symbol, `None` for letter-averaged curves.
    pub letter: Option<u8>,
    /// Length of the source series.
    pub len: usize,
    pub points: Vec<CurvePoint>,
}

impl DisplacementCurve {
    pub fn get(&self, k: usize) -> Option<f64> {
        self.points
            .binary_search_by_key(&k, |p| p.k)
            .ok()
            .map(|i| self.points[i].f)
    }
}

/// Largest admissible window length for a series of length `len`.
pub fn k_limit(len: usize) -> usize {
    len / 4
}

fn validate_grid(len: usize, k_grid: &[usize]) -> Result<()> {
    let limit = k_limit(len);
    let mut prev = 0;
    for &k in k_grid {
        if k == 0 || k <= prev {
            return Err(Error::InvalidKGrid(k));
        }
        if k > limit {
            return Err(Error::KOutOfRange { k, limit, len });
        }
        prev = k;
    }
    Ok(())
}

fn prefix_sums(bits: &[u8]) -> Vec<u64> {
    let mut prefix = Vec::with_capacity(bits.len() + 1);
    let mut acc = 0u64;
    prefix.push(0);
    for &b in bits {
        acc += u64::from(b);
        prefix.push(acc);
    }
    prefix
}

fn window_variance(prefix: &[u64], k: usize) -> f64 {
    let windows = prefix.len() - k;
    let (mut s1, mut s2) = (0u64, 0u128);
    for i in 0..windows {
        let y = prefix[i + k] - prefix[i];
        s1 += y;
        s2 += u128::from(y * y);
    }
    let m = windows as u128;
    let s1 = u128::from(s1);
    let numerator = m * s2 - s1 * s1;
    numerator as f64 / (windows as f64 * windows as f64)
}

/// `F(k)` for each `k` in `k_grid`.
pub fn displacement(series: &IndicatorSeries, k_grid: &[usize]) -> Result<DisplacementCurve> {
    validate_grid(series.len(), k_grid)?;
    let prefix = prefix_sums(&series.bits);
    let points = k_grid
        .iter()
        .map(|&k| CurvePoint {
            k,
            f: window_variance(&prefix, k),
        })
        .collect();
    Ok(DisplacementCurve {
        letter: Some(series.letter),
        len: series.len(),
        points,
    })
}

/// Same as [`displacement`], with the `k` values spread over the rayon pool.
/// Every `k` is reduced in a fixed order, so results are bit-identical.
pub fn displacement_parallel(series: &IndicatorSeries, k_grid: &[usize]) -> Result<DisplacementCurve> {
    validate_grid(series.len(), k_grid)?;
    let prefix = prefix_sums(&series.bits);
    let points = k_grid
        .par_iter()
        .map(|&k| CurvePoint {
            k,
            f: window_variance(&prefix, k),
        })
        .collect();
    Ok(DisplacementCurve {
        letter: Some(series.letter),
        len: series.len(),
        points,
    })
}

/// Mean-square partial sums of the centred series `ξ_j = x_j − μ_k`, where
/// `μ_k` is the per-symbol mean of the length-`k` window sums. Floating-point
/// route kept alongside [`displacement`] as a numerical cross-check.
pub fn displacement_centered(series: &IndicatorSeries, k_grid: &[usize]) -> Result<DisplacementCurve> {
    validate_grid(series.len(), k_grid)?;
    let int_prefix = prefix_sums(&series.bits);
    let mut points = Vec::with_capacity(k_grid.len());
    let mut xi_prefix = vec![0.0f64; series.len() + 1];
    for &k in k_grid {
        let windows = series.len() - k + 1;
        let total: u64 = (0..windows).map(|i| int_prefix[i + k] - int_prefix[i]).sum();
        let mu = total as f64 / (windows as f64 * k as f64);
        let mut acc = 0.0;
        for (j, &b) in series.bits.iter().enumerate() {
            acc += f64::from(b) - mu;
            xi_prefix[j + 1] = acc;
        }
        let msq = (0..windows)
            .map(|i| {
                let s = xi_prefix[i + k] - xi_prefix[i];
                s * s
            })
            .sum::<f64>()
            / windows as f64;
        points.push(CurvePoint { k, f: msq });
    }
    Ok(DisplacementCurve {
        letter: Some(series.letter),
        len: series.len(),
        points,
    })
}

/// Equal-weight mean of curves sampled on the same grid.
pub fn average_curves(curves: &[DisplacementCurve]) -> Result<DisplacementCurve> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InvalidParameter("no curves to average".into()))?;
    for c in &curves[1..] {
        let same_grid = c.points.len() == first.points.len()
            && c.points.iter().zip(&first.points).all(|(a, b)| a.k == b.k);
        if !same_grid {
            return Err(Error::InvalidParameter("curves have different k grids".into()));
        }
    }
    let n = curves.len() as f64;
    let points = first
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| CurvePoint {
            k: p.k,
            f: curves.iter().map(|c| c.points[i].f).sum::<f64>() / n,
        })
        .collect();
    Ok(DisplacementCurve {
        letter: None,
        len: first.len,
        points,
    })
}

/// Power-law fit `F(k) ≈ e^c · k^α` in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub alpha: f64,
    pub log_intercept: f64,
    pub k_min: usize,
    pub k_max: usize,
    pub rms_residual: f64,
    pub points_used: usize,
    /// Points in range skipped because `F(k) = 0`.
    pub zero_points_excluded: usize,
}

pub fn fit_exponent(curve: &DisplacementCurve, k_min: usize, k_max: usize) -> Result<ScalingFit> {
    if k_min >= k_max {
        return Err(Error::InvalidParameter(format!(
            "fit range requires k_min < k_max (got {k_min}..{k_max})"
        )));
    }
    let in_range = curve.points.iter().filter(|p| p.k >= k_min && p.k <= k_max);
    let mut zeros = 0;
    let mut pts = Vec::new();
    for p in in_range {
        if p.f > 0.0 {
            pts.push(((p.k as f64).ln(), p.f.ln()));
        } else {
            zeros += 1;
        }
    }
    if zeros > 0 {
        warn!("excluded {zeros} zero-valued points from fit over [{k_min}, {k_max}]");
    }
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            found: pts.len(),
        });
    }
    let line = least_squares(&pts);
    Ok(ScalingFit {
        alpha: line.slope,
        log_intercept: line.intercept,
        k_min,
        k_max,
        rms_residual: line.rms,
        points_used: pts.len(),
        zero_points_excluded: zeros,
    })
}

pub const DEFAULT_POINTS_PER_DECADE: usize = 20;

/// Log-spaced distinct integers from 1 up to and including `⌊len/4⌋`.
pub fn default_k_grid(len: usize, points_per_decade: usize) -> Vec<usize> {
    let max = k_limit(len);
    let per_decade = points_per_decade.max(1) as f64;
    let mut grid: Vec<usize> = Vec::new();
    for j in 0.. {
        let k = 10f64.powf(j as f64 / per_decade).round() as usize;
        if k > max {
            break;
        }
        if grid.last() != Some(&k) {
            grid.push(k);
        }
    }
    if max >= 1 && grid.last() != Some(&max) {
        grid.push(max);
    }
    grid
}
