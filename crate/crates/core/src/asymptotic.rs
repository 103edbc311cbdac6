//! Large-`N` approximation of the non-trivial root.
//!
//! Substituting `q = 1 + x / N` into `phi` and letting `N` grow gives the limit
//! `psi_a(x) = (1 + a)(e^x - 1) - x`. Besides `x = 0` it has one negative root
//! `-x+(a)`, so `q+ ~ 1 - x+(a) / N` with an error that shrinks as `N` grows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loan::{phi_eval, NominalInterestFraction};
use crate::roots::newton_bisect;
use crate::stochastic::actuarial_rate_from_q;

const MAX_DOUBLINGS: u32 = 200;

fn check_a(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "the limit equation has a non-zero root only for a > 0, got {a}"
        )))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// `psi_a(x) = (1 + a)(e^x - 1) - x`.
pub fn psi_eval(a: f64, x: f64) -> f64 {
    (1.0 + a) * x.exp_m1() - x
}

fn psi_and_derivative(a: f64, x: f64) -> (f64, f64) {
    (psi_eval(a, x), (1.0 + a) * x.exp() - 1.0)
}

/// Magnitude `x+` of the negative root of `psi_a`.
pub fn solve_x_plus(a: f64, tol: f64) -> Result<f64> {
    check_a(a)?;
    check_tol(tol)?;

    // psi_a'(0) = a > 0, so psi_a < 0 just left of zero once eps is small enough
    let mut eps = tol;
    let mut shrinks = 0;
    while psi_eval(a, -eps) >= 0.0 {
        if shrinks == MAX_DOUBLINGS {
            return Err(Error::BracketFailure {
                doublings: shrinks,
                upper: -eps,
            });
        }
        eps *= 0.5;
        shrinks += 1;
    }

    let mut far = 1.0;
    let mut doublings = 0;
    while psi_eval(a, -far) <= 0.0 {
        if doublings == MAX_DOUBLINGS {
            return Err(Error::BracketFailure {
                doublings,
                upper: far,
            });
        }
        far *= 2.0;
        doublings += 1;
    }

    let x = newton_bisect(|x| psi_and_derivative(a, x), -far, -eps, tol);
    Ok(-x)
}

/// `1 - x+(a) / N`.
pub fn approx_q_plus(a: f64, n: u32, tol: f64) -> Result<f64> {
    let x_plus = solve_x_plus(a, tol)?;
    q_from_x_plus(x_plus, n)
}

fn q_from_x_plus(x_plus: f64, n: u32) -> Result<f64> {
    let n_f = f64::from(n);
    if n_f <= x_plus {
        return Err(Error::Domain(format!(
            "need more payments than x+ = {x_plus} for a root in (0, 1), got {n}"
        )));
    }
    Ok(1.0 - x_plus / n_f)
}

/// Actuarial expected rate evaluated at the approximate root.
pub fn approx_actuarial_rate(
    a: f64,
    n: u32,
    periods_per_year: u32,
    p: f64,
    tol: f64,
) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!(
            "payment probability must lie in (0, 1], got {p}"
        )));
    }
    let q = approx_q_plus(a, n, tol)?;
    Ok(actuarial_rate_from_q(q, p, periods_per_year))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSolution {
    pub a: f64,
    pub x_plus: f64,
    pub q_plus_approx: f64,
    pub actuarial_rate_approx: f64,
}

impl AsymptoticSolution {
    pub fn solve(a: f64, n: u32, periods_per_year: u32, p: f64, tol: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Domain(format!(
                "payment probability must lie in (0, 1], got {p}"
            )));
        }
        let x_plus = solve_x_plus(a, tol)?;
        let q_plus_approx = q_from_x_plus(x_plus, n)?;
        Ok(Self {
            a,
            x_plus,
            q_plus_approx,
            actuarial_rate_approx: actuarial_rate_from_q(q_plus_approx, p, periods_per_year),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvePanel {
    /// `phi` over the whole unit interval.
    Global,
    /// Neighbourhood of `q = 1` at the scale `1 / N`.
    Blowup,
}

impl CurvePanel {
    pub fn as_str(self) -> &'static str {
        match self {
            CurvePanel::Global => "global",
            CurvePanel::Blowup => "blowup",
        }
    }
}

/// One sample of `phi(q)` next to the limit curve at `x = N (q - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub panel: CurvePanel,
    pub q: f64,
    pub x: f64,
    pub phi: f64,
    pub psi: f64,
}

/// Plot data for `phi` and its blow-up near `q = 1`.
///
/// The global panel spans `q` in `[0, 1 + 1/N]`; the blow-up panel spans
/// `x` in `[-2 x+, x+]`. Each panel has `points` samples.
pub fn figure_curves(a: f64, n: u32, points: usize, tol: f64) -> Result<Vec<CurvePoint>> {
    let x_plus = solve_x_plus(a, tol)?;
    let frac = NominalInterestFraction::new(a)?;
    let n_f = f64::from(n);
    let steps = points.max(2) - 1;
    let point = |panel, q: f64, x: f64| CurvePoint {
        panel,
        q,
        x,
        phi: phi_eval(frac, n, q),
        psi: psi_eval(a, x),
    };

    let q_hi = 1.0 + 1.0 / n_f;
    let global = (0..=steps).map(|i| {
        let q = q_hi * i as f64 / steps as f64;
        point(CurvePanel::Global, q, n_f * (q - 1.0))
    });
    let blowup = (0..=steps).map(|i| {
        let x = -2.0 * x_plus + 3.0 * x_plus * i as f64 / steps as f64;
        point(CurvePanel::Blowup, 1.0 + x / n_f, x)
    });
    Ok(global.chain(blowup).collect())
}
