//! Random repayment delays and the realized rate they induce.
//!
//! Installment `n` lands `S_n = X_1 + ... + X_n` periods after disbursement,
//! with i.i.d. geometric gaps `X_i` on `{1, 2, ...}`. The realized annual rate
//! `R` of one path is the unique positive root of
//!
//! ```text
//! principal = sum_n installment * exp(-R * S_n / m)
//! ```
//!
//! Taking expectations inside that balance instead gives the actuarial expected
//! rate, which has a closed form through the geometric moment generating
//! function: `m ln(1 + p (1/q+ - 1))`.

use rand::distr::Open01;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loan::{solve_q_plus, LoanContract, DEFAULT_TOL};
use crate::roots::newton_bisect;
use crate::stats::{describe, Histogram, SummaryStats};

/// Histogram bins used when none are requested.
pub const DEFAULT_BINS: usize = 60;

const MAX_DOUBLINGS: u32 = 200;

/// Geometric delay law: each period the borrower pays with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayModel {
    p: f64,
}

impl DelayModel {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p <= 1.0 {
            Ok(Self { p })
        } else {
            Err(Error::Domain(format!(
                "payment probability must lie in (0, 1], got {p}"
            )))
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Mean gap `1 / p`.
    pub fn mean_gap(&self) -> f64 {
        1.0 / self.p
    }

    /// One geometric draw by inverse transform, `ceil(ln U / ln(1 - p))`.
    pub fn sample_gap<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.p == 1.0 {
            return 1;
        }
        let u: f64 = rng.sample(Open01);
        let x = (u.ln() / (-self.p).ln_1p()).ceil();
        // float-to-int casts saturate; the support starts at 1
        (x as u64).max(1)
    }
}

/// One realization of the inter-payment gaps and their running totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepaymentPath {
    gaps: Vec<u64>,
    partial_sums: Vec<u64>,
}

impl RepaymentPath {
    pub fn from_gaps(gaps: Vec<u64>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::Domain(
                "a repayment path needs at least one gap".into(),
            ));
        }
        if let Some(i) = gaps.iter().position(|&g| g == 0) {
            return Err(Error::Domain(format!(
                "gap {i} is zero; gaps are at least one period"
            )));
        }
        let partial_sums = gaps
            .iter()
            .scan(0u64, |s, &g| {
                *s = s.saturating_add(g);
                Some(*s)
            })
            .collect();
        Ok(Self { gaps, partial_sums })
    }

    /// Every installment exactly on time.
    pub fn on_schedule(n: usize) -> Self {
        Self::from_gaps(vec![1; n.max(1)]).expect("unit gaps are valid")
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    pub fn partial_sums(&self) -> &[u64] {
        &self.partial_sums
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    /// The same path with installment `index` one period later.
    pub fn with_delayed_payment(&self, index: usize) -> Self {
        let mut gaps = self.gaps.clone();
        gaps[index] += 1;
        Self::from_gaps(gaps).expect("delaying a valid path keeps it valid")
    }
}

/// Draws `n` independent geometric gaps.
pub fn sample_path<R: Rng + ?Sized>(
    delay_model: &DelayModel,
    n: usize,
    rng: &mut R,
) -> RepaymentPath {
    let gaps = (0..n.max(1)).map(|_| delay_model.sample_gap(rng)).collect();
    RepaymentPath::from_gaps(gaps).expect("geometric gaps are at least one")
}

/// Present value of the installments along `path` at annual rate `r`, and its derivative in `r`.
fn path_value_and_derivative(contract: &LoanContract, path: &RepaymentPath, r: f64) -> (f64, f64) {
    let m = f64::from(contract.periods_per_year());
    let (mut g, mut dg) = (0.0, 0.0);
    for &s in path.partial_sums() {
        let t = s as f64 / m;
        let d = (-r * t).exp();
        g += d;
        dg -= t * d;
    }
    (contract.installment() * g, contract.installment() * dg)
}

/// Realized annual rate of one repayment path.
///
/// The present value of the installments is strictly decreasing in the rate,
/// exceeds the principal at zero and vanishes at infinity, so the root is
/// bracketed by doubling an upper bound from 1 and then refined.
pub fn solve_r(contract: &LoanContract, path: &RepaymentPath, tol: f64) -> Result<f64> {
    if path.len() != contract.num_payments() as usize {
        return Err(Error::PathLength {
            expected: contract.num_payments() as usize,
            got: path.len(),
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let principal = contract.principal();
    let f = |r: f64| {
        let (g, dg) = path_value_and_derivative(contract, path, r);
        (g - principal, dg)
    };

    let mut hi = 1.0;
    let mut doublings = 0;
    while f(hi).0 >= 0.0 {
        if doublings == MAX_DOUBLINGS {
            return Err(Error::BracketFailure {
                doublings,
                upper: hi,
            });
        }
        hi *= 2.0;
        doublings += 1;
    }
    Ok(newton_bisect(f, 0.0, hi, tol))
}

/// Actuarial expected rate `m ln(1 + p (1/q+ - 1))` for a known root `q+`.
pub fn actuarial_rate_from_q(q_plus: f64, p: f64, periods_per_year: u32) -> f64 {
    f64::from(periods_per_year) * (p * (1.0 / q_plus - 1.0)).ln_1p()
}

/// The constant rate that balances the contract in expectation under `delay_model`.
pub fn actuarial_rate(contract: &LoanContract, delay_model: &DelayModel, tol: f64) -> Result<f64> {
    let sol = solve_q_plus(contract, tol)?;
    Ok(actuarial_rate_from_q(
        sol.q_plus,
        delay_model.p(),
        contract.periods_per_year(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub contract: LoanContract,
    pub delay_model: DelayModel,
    pub num_trials: usize,
    pub seed: u64,
    pub solver_tol: f64,
    pub bins: usize,
}

impl SimulationConfig {
    pub fn new(
        contract: LoanContract,
        delay_model: DelayModel,
        num_trials: usize,
        seed: u64,
    ) -> Result<Self> {
        if num_trials == 0 {
            return Err(Error::Domain("num_trials must be at least 1".into()));
        }
        Ok(Self {
            contract,
            delay_model,
            num_trials,
            seed,
            solver_tol: DEFAULT_TOL,
            bins: DEFAULT_BINS,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        self.solver_tol = tol;
        Ok(self)
    }

    pub fn with_bins(mut self, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::Domain("bins must be at least 1".into()));
        }
        self.bins = bins;
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub config: SimulationConfig,
    /// Realized rates, indexed by trial.
    pub samples: Vec<f64>,
    pub stats: SummaryStats,
    pub histogram: Histogram,
    pub deterministic_rate: f64,
    pub actuarial_rate: f64,
}

/// Random stream of one trial: ChaCha8 keyed by `seed`, stream id `trial`.
///
/// Depends only on `(seed, trial)`, which is what keeps parallel runs
/// bit-identical to sequential ones.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(config: &SimulationConfig, trial: usize) -> Result<f64> {
    let mut rng = trial_rng(config.seed, trial as u64);
    let path = sample_path(
        &config.delay_model,
        config.contract.num_payments() as usize,
        &mut rng,
    );
    solve_r(&config.contract, &path, config.solver_tol)
}

/// Runs the Monte Carlo experiment on rayon's global pool.
pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationResult> {
    let samples = (0..config.num_trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect::<Result<Vec<f64>>>()?;
    assemble(config, samples)
}

/// Runs the experiment on a dedicated pool of `threads` workers.
///
/// The output is identical to [`run_simulation`] for every thread count.
pub fn run_simulation_with_threads(
    config: &SimulationConfig,
    threads: usize,
) -> Result<SimulationResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_simulation(config))
}

fn assemble(config: &SimulationConfig, samples: Vec<f64>) -> Result<SimulationResult> {
    let stats = describe(&samples)?;
    let histogram = Histogram::from_samples(&samples, config.bins)?;
    let deterministic_rate = solve_q_plus(&config.contract, config.solver_tol)?.annual_rate;
    let actuarial_rate = actuarial_rate(&config.contract, &config.delay_model, config.solver_tol)?;
    Ok(SimulationResult {
        config: *config,
        samples,
        stats,
        histogram,
        deterministic_rate,
        actuarial_rate,
    })
}
