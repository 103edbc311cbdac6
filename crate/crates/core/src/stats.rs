//! Moment statistics and equal-width histograms of a sample.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Location, scale and shape of a sample.
///
/// Central moments use the biased (divide by `n`) estimators. `kurtosis` is
/// the raw ratio `m4 / m2^2`, so a Gaussian scores 3 and a symmetric two-point
/// law scores 1. Shape statistics are `None` when the sample has no spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub std_dev: f64,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
    pub min: f64,
    pub max: f64,
}

impl SummaryStats {
    pub fn is_degenerate(&self) -> bool {
        self.skewness.is_none()
    }
}

fn range(samples: &[f64]) -> (f64, f64) {
    samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

/// Computes [`SummaryStats`] for a non-empty sample without rejecting zero variance.
pub fn describe(samples: &[f64]) -> Result<SummaryStats> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.len() as f64;
    let (min, max) = range(samples);

    if min == max {
        return Ok(SummaryStats {
            mean: min,
            std_dev: 0.0,
            skewness: None,
            kurtosis: None,
            min,
            max,
        });
    }

    let mean = samples.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    let (skewness, kurtosis) = if m2 > 0.0 {
        (Some(m3 / m2.powf(1.5)), Some(m4 / (m2 * m2)))
    } else {
        (None, None)
    };
    Ok(SummaryStats {
        // rounding can push the mean a hair outside the observed range
        mean: mean.clamp(min, max),
        std_dev: m2.sqrt(),
        skewness,
        kurtosis,
        min,
        max,
    })
}

/// Like [`describe`], but zero variance is an error carrying the location statistics.
pub fn summary_stats(samples: &[f64]) -> Result<SummaryStats> {
    let stats = describe(samples)?;
    if stats.is_degenerate() {
        Err(Error::DegenerateSample(stats))
    } else {
        Ok(stats)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Bins `samples` into `bins` equal-width bins over `[min, max]`.
    ///
    /// Bins are right-open except the last, which also holds `max`. A sample
    /// with no spread gets unit-width edges centred on its single value.
    pub fn from_samples(samples: &[f64], bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Domain("histogram needs at least one bin".into()));
        }
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        let (mut lo, mut hi) = range(samples);
        if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        }
        let width = (hi - lo) / bins as f64;
        let mut bin_edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
        bin_edges.push(hi);

        let mut counts = vec![0u64; bins];
        for &x in samples {
            let mut i = (((x - lo) / width) as usize).min(bins - 1);
            // settle against the stored edges, not the division
            while i > 0 && x < bin_edges[i] {
                i -= 1;
            }
            while i + 1 < bins && x >= bin_edges[i + 1] {
                i += 1;
            }
            counts[i] += 1;
        }
        Ok(Self { bin_edges, counts })
    }

    pub fn num_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(left, right, count)` for each bin.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, u64)> + '_ {
        self.bin_edges
            .windows(2)
            .zip(&self.counts)
            .map(|(e, &c)| (e[0], e[1], c))
    }
}
