//! CSV and JSON-ready views of simulation output.
//!
//! Samples: `trial,R`. Histogram: `bin_left,bin_right,count`. Curves:
//! `panel,q,x,phi,psi`. Reals are written with 17 significant digits, which
//! round-trips every `f64`.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::asymptotic::CurvePoint;
use crate::stats::Histogram;
use crate::stochastic::SimulationResult;

const SIGNIFICANT_DIGITS: i32 = 17;

/// Fixed-point decimal with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.16}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_samples_csv<W: Write>(mut out: W, samples: &[f64]) -> io::Result<()> {
    writeln!(out, "trial,R")?;
    for (t, r) in samples.iter().enumerate() {
        writeln!(out, "{t},{}", format_sig17(*r))?;
    }
    out.flush()
}

pub fn write_histogram_csv<W: Write>(mut out: W, histogram: &Histogram) -> io::Result<()> {
    writeln!(out, "bin_left,bin_right,count")?;
    for (l, r, c) in histogram.bins() {
        writeln!(out, "{},{},{c}", format_sig17(l), format_sig17(r))?;
    }
    out.flush()
}

pub fn write_curves_csv<W: Write>(mut out: W, points: &[CurvePoint]) -> io::Result<()> {
    writeln!(out, "panel,q,x,phi,psi")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{}",
            p.panel.as_str(),
            format_sig17(p.q),
            format_sig17(p.x),
            format_sig17(p.phi),
            format_sig17(p.psi)
        )?;
    }
    out.flush()
}

/// Summary of one simulation, enough to overlay `N(actuarial_rate, std_dev)` on the histogram.
///
/// `skewness` and `kurtosis` are `None` (JSON `null`) for a sample without spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
    pub min: f64,
    pub max: f64,
    pub actuarial_rate: f64,
    pub deterministic_rate: f64,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
}

impl From<&SimulationResult> for SimulationSummary {
    fn from(res: &SimulationResult) -> Self {
        Self {
            mean: res.stats.mean,
            std_dev: res.stats.std_dev,
            skewness: res.stats.skewness,
            kurtosis: res.stats.kurtosis,
            min: res.stats.min,
            max: res.stats.max,
            actuarial_rate: res.actuarial_rate,
            deterministic_rate: res.deterministic_rate,
            p: res.config.delay_model.p(),
            trials: res.config.num_trials,
            seed: res.config.seed,
        }
    }
}
