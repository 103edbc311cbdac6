//! Effective interest rates of equal-installment microcredit loans.
//!
//! - [`loan`]: the contract, its balance polynomial and the deterministic rate.
//! - [`stochastic`]: geometric repayment delays, the realized rate of a path,
//!   the Monte Carlo engine and the actuarial expected rate.
//! - [`asymptotic`]: the large-`N` limit of the root and the rates built on it.
//! - [`stats`] and [`export`]: moments, histograms and file formats.
//!
//! ```
//! use microrate::loan::{solve_q_plus, LoanContract, DEFAULT_TOL};
//!
//! let sol = solve_q_plus(&LoanContract::canonical(), DEFAULT_TOL).unwrap();
//! assert!((sol.annual_rate - 0.1974).abs() < 5e-4);
//! ```

pub mod asymptotic;
pub mod error;
pub mod export;
pub mod loan;
mod roots;
pub mod stats;
pub mod stochastic;

pub use error::{Error, Result};
pub use loan::{LoanContract, NominalInterestFraction, RateSolution, DEFAULT_TOL};
pub use stochastic::{DelayModel, RepaymentPath, SimulationConfig, SimulationResult};
