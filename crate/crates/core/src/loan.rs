//! Equal-installment loan contracts and their deterministic effective rate.
//!
//! A contract lends `principal` and collects `num_payments` installments of
//! `installment`, one per period, with `periods_per_year` periods in a year.
//! With `q = exp(-r / m)` the per-period discount factor at the continuously
//! compounded annual rate `r`, the contract balances when
//!
//! ```text
//! principal = installment * (q + q^2 + ... + q^N)
//! ```
//!
//! Clearing the denominator of the geometric sum gives the degree `N + 1`
//! polynomial `c q^(N+1) - (P + c) q + P`, which always vanishes at `q = 1`
//! and has exactly one more root `q+` in `(0, 1)`. That root is the one with
//! financial meaning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::newton_bisect;

/// Default absolute tolerance on discount factors and rates.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Upper-bracket candidates `1 - 2^-i` tried before giving up.
const MAX_HALVINGS: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoanContract {
    principal: f64,
    installment: f64,
    num_payments: u32,
    periods_per_year: u32,
}

impl LoanContract {
    /// Validates and builds a contract.
    ///
    /// All fields must be strictly positive and the installments must repay
    /// strictly more than the principal, otherwise there is no positive rate.
    pub fn new(
        principal: f64,
        installment: f64,
        num_payments: u32,
        periods_per_year: u32,
    ) -> Result<Self> {
        if !(principal.is_finite() && principal > 0.0) {
            return Err(Error::InvalidContract(format!(
                "principal must be positive and finite, got {principal}"
            )));
        }
        if !(installment.is_finite() && installment > 0.0) {
            return Err(Error::InvalidContract(format!(
                "installment must be positive and finite, got {installment}"
            )));
        }
        if num_payments == 0 {
            return Err(Error::InvalidContract(
                "num_payments must be at least 1".into(),
            ));
        }
        if periods_per_year == 0 {
            return Err(Error::InvalidContract(
                "periods_per_year must be at least 1".into(),
            ));
        }
        let total = installment * f64::from(num_payments);
        if total <= principal {
            return Err(Error::InvalidContract(format!(
                "installment x payments ({total}) must exceed principal ({principal})"
            )));
        }
        Ok(Self {
            principal,
            installment,
            num_payments,
            periods_per_year,
        })
    }

    /// The Grameen example: 1000 lent, 50 weekly installments of 22.
    pub fn canonical() -> Self {
        Self::new(1000.0, 22.0, 50, 52).expect("canonical contract is valid")
    }

    /// Contract with nominal interest fraction `a` over `num_payments` periods.
    ///
    /// The installment is `principal * (1 + a) / num_payments`.
    pub fn from_nominal(
        principal: f64,
        a: NominalInterestFraction,
        num_payments: u32,
        periods_per_year: u32,
    ) -> Result<Self> {
        let installment = principal * (1.0 + a.value()) / f64::from(num_payments);
        Self::new(principal, installment, num_payments, periods_per_year)
    }

    pub fn principal(&self) -> f64 {
        self.principal
    }

    pub fn installment(&self) -> f64 {
        self.installment
    }

    pub fn num_payments(&self) -> u32 {
        self.num_payments
    }

    pub fn periods_per_year(&self) -> u32 {
        self.periods_per_year
    }

    /// Total nominal interest as a fraction of the principal.
    pub fn nominal_fraction(&self) -> NominalInterestFraction {
        let a = (self.installment * f64::from(self.num_payments) - self.principal) / self.principal;
        NominalInterestFraction(a)
    }
}

/// `a = (c N - P) / P`, the total interest charged relative to the principal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct NominalInterestFraction(f64);

impl NominalInterestFraction {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 {
            Ok(Self(a))
        } else {
            Err(Error::Domain(format!(
                "nominal interest fraction must be positive, got {a}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The non-trivial root of the balance equation and the rate it encodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSolution {
    pub q_plus: f64,
    pub annual_rate: f64,
}

/// `q + q^2 + ... + q^n` and its derivative, by Horner's rule.
fn geometric_sum_and_derivative(q: f64, n: u32) -> (f64, f64) {
    let mut s = 0.0;
    let mut ds = 0.0;
    for _ in 0..n {
        ds = (1.0 + s) + q * ds;
        s = q * (1.0 + s);
    }
    (s, ds)
}

fn residual_and_derivative(contract: &LoanContract, q: f64) -> (f64, f64) {
    let (s, ds) = geometric_sum_and_derivative(q, contract.num_payments);
    (
        contract.principal - contract.installment * s,
        -contract.installment * ds,
    )
}

/// Balance residual `P - c (q + ... + q^N)`.
///
/// Evaluated as a Horner sum rather than through `(q - q^(N+1)) / (1 - q)`,
/// which cancels catastrophically near `q = 1`.
pub fn yunus_polynomial_eval(contract: &LoanContract, q: f64) -> f64 {
    residual_and_derivative(contract, q).0
}

/// The contract's polynomial `c q^(N+1) - (P + c) q + P`, in monomial form.
///
/// Equals `(1 - q)` times [`yunus_polynomial_eval`]; for the canonical
/// contract this is `22 q^51 - 1022 q + 1000`.
pub fn yunus_polynomial(contract: &LoanContract, q: f64) -> f64 {
    let c = contract.installment;
    let p = contract.principal;
    c * q.powi(contract.num_payments as i32 + 1) - (p + c) * q + p
}

/// `(1 + a) q^(N+1) - (N + 1 + a) q + N`, the contract polynomial scaled by `N / P`.
pub fn phi_eval(a: NominalInterestFraction, n: u32, q: f64) -> f64 {
    let a = a.value();
    let n_f = f64::from(n);
    (1.0 + a) * q.powi(n as i32 + 1) - (n_f + 1.0 + a) * q + n_f
}

/// Solves for the root `q+` of the balance residual in `(0, 1)`.
///
/// The residual equals `P` at zero and decreases on `[0, 1]`, so the upper
/// bracket is the first `1 - 2^-i` where it turns negative.
pub fn solve_q_plus(contract: &LoanContract, tol: f64) -> Result<RateSolution> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..=MAX_HALVINGS {
        let h = 1.0 - 0.5f64.powi(i as i32);
        let r = yunus_polynomial_eval(contract, h);
        if r == 0.0 {
            return rate_solution(h, contract.periods_per_year);
        }
        if r < 0.0 {
            hi = Some(h);
            break;
        }
        lo = h;
    }
    let hi = hi.ok_or(Error::NoRootInUnitInterval {
        halvings: MAX_HALVINGS,
    })?;

    let q = newton_bisect(|q| residual_and_derivative(contract, q), lo, hi, tol);
    rate_solution(q, contract.periods_per_year)
}

fn rate_solution(q_plus: f64, periods_per_year: u32) -> Result<RateSolution> {
    Ok(RateSolution {
        q_plus,
        annual_rate: rate_from_q(q_plus, periods_per_year)?,
    })
}

/// Continuously compounded annual rate `-m ln q` of a per-period discount factor.
pub fn rate_from_q(q: f64, periods_per_year: u32) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!(
            "discount factor must lie in (0, 1), got {q}"
        )));
    }
    Ok(-f64::from(periods_per_year) * q.ln())
}

/// Per-period discount factor `exp(-r / m)`.
pub fn q_from_rate(r: f64, periods_per_year: u32) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("rate must be positive, got {r}")));
    }
    Ok((-r / f64::from(periods_per_year)).exp())
}
