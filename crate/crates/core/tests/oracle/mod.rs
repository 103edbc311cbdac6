//! Independent re-implementations used as test oracles.
//!
//! Nothing here calls into the library's solvers or samplers: a different RNG
//! (SplitMix64), a different geometric sampler (counting Bernoulli trials), a
//! different form of the balance (`v^(R S)` with `v = e^(-1/m)`) and grid
//! scanning or plain bisection instead of Newton.

#![allow(dead_code)]

pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on the open interval (0, 1).
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn next_gaussian(&mut self) -> f64 {
        let u = self.next_open01();
        let v = self.next_open01();
        (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
    }
}

/// Geometric draw on {1, 2, ...}: number of Bernoulli(p) trials up to the first success.
pub fn geometric_by_trials(p: f64, rng: &mut SplitMix64) -> u64 {
    let mut k = 1;
    while rng.next_open01() >= p {
        k += 1;
    }
    k
}

/// `sum_n c v^(R S_n)` with `v = exp(-1/m)`.
pub fn balance(installment: f64, periods_per_year: u32, sums: &[u64], r: f64) -> f64 {
    let v = (-1.0 / f64::from(periods_per_year)).exp();
    sums.iter()
        .map(|&s| installment * v.powf(r * s as f64))
        .sum()
}

pub fn partial_sums(gaps: &[u64]) -> Vec<u64> {
    let mut total = 0;
    gaps.iter()
        .map(|g| {
            total += g;
            total
        })
        .collect()
}

/// Root of the balance by grid scan over `[0, upper]`, refined by bisection.
///
/// Scans at step 1e-3, then 1e-5 inside the located cell, then 1e-7; since the
/// balance is monotone this lands in the same 1e-7 cell as a full fine scan.
pub fn grid_scan_rate(
    principal: f64,
    installment: f64,
    periods_per_year: u32,
    gaps: &[u64],
    upper: f64,
) -> f64 {
    let sums = partial_sums(gaps);
    let f = |r: f64| balance(installment, periods_per_year, &sums, r) - principal;
    assert!(f(0.0) > 0.0 && f(upper) < 0.0, "root not in [0, {upper}]");

    let (mut lo, mut hi) = (0.0, upper);
    for step in [1e-3, 1e-5, 1e-7] {
        let n = ((hi - lo) / step).ceil() as usize;
        let mut found = None;
        for i in 0..n {
            let a = lo + step * i as f64;
            let b = (a + step).min(hi);
            if f(b) <= 0.0 {
                found = Some((a, b));
                break;
            }
        }
        (lo, hi) = found.expect("monotone balance crosses inside the bracket");
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Plain bisection on the balance over `[0, upper]`.
pub fn bisect_rate(
    principal: f64,
    installment: f64,
    periods_per_year: u32,
    sums: &[u64],
    upper: f64,
) -> f64 {
    let (mut lo, mut hi) = (0.0, upper);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if balance(installment, periods_per_year, sums, mid) > principal {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sequential Monte Carlo of the realized rate, sharing no code with the library.
pub fn independent_simulation(
    principal: f64,
    installment: f64,
    num_payments: usize,
    periods_per_year: u32,
    p: f64,
    trials: usize,
    seed: u64,
) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    let mut sums = vec![0u64; num_payments];
    (0..trials)
        .map(|_| {
            let mut total = 0;
            for s in sums.iter_mut() {
                total += geometric_by_trials(p, &mut rng);
                *s = total;
            }
            bisect_rate(principal, installment, periods_per_year, &sums, 1.0)
        })
        .collect()
}

pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
