//! `microrate`: effective interest rates of microcredit loans from the command line.
//!
//! Results go to stdout as one JSON object; notes go to stderr. Exit status is
//! 0 on success, 2 when flags fail validation, 3 on I/O failure.

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use microrate::asymptotic::{figure_curves, AsymptoticSolution};
use microrate::export::{
    write_curves_csv, write_histogram_csv, write_samples_csv, SimulationSummary,
};
use microrate::loan::solve_q_plus;
use microrate::stochastic::{
    actuarial_rate, run_simulation, run_simulation_with_threads, DEFAULT_BINS,
};
use microrate::{DelayModel, LoanContract, NominalInterestFraction, SimulationConfig, DEFAULT_TOL};

const CURVE_POINTS: usize = 201;

#[derive(Debug, Parser)]
#[command(
    name = "microrate",
    version,
    about = "Effective interest rates of microcredit contracts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deterministic rate of an on-schedule contract.
    Solve {
        #[command(flatten)]
        contract: ContractArgs,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Actuarial expected rate under geometric payment delays.
    Actuarial {
        #[command(flatten)]
        contract: ContractArgs,
        /// Probability of paying in a given period.
        #[arg(long = "p", default_value_t = 0.95)]
        p: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Monte Carlo distribution of the realized rate.
    Simulate(SimulateArgs),
    /// Large-N approximation of the root and the actuarial rate.
    Approx(ApproxArgs),
}

#[derive(Debug, Args)]
struct ContractArgs {
    #[arg(long, default_value_t = 1000.0)]
    principal: f64,
    #[arg(long, default_value_t = 22.0)]
    installment: f64,
    #[arg(long, default_value_t = 50)]
    payments: u32,
    #[arg(long, default_value_t = 52)]
    periods_per_year: u32,
}

impl ContractArgs {
    fn contract(&self) -> Result<LoanContract, CliError> {
        Ok(LoanContract::new(
            self.principal,
            self.installment,
            self.payments,
            self.periods_per_year,
        )?)
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    contract: ContractArgs,
    #[arg(long = "p", default_value_t = 0.95)]
    p: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Worker threads; defaults to one per core. Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out_samples: Option<PathBuf>,
    #[arg(long)]
    out_histogram: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    /// Nominal interest fraction (total installments / principal - 1).
    #[arg(long = "a", default_value_t = 0.1, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 50)]
    payments: u32,
    #[arg(long, default_value_t = 52)]
    periods_per_year: u32,
    #[arg(long = "p", default_value_t = 0.95)]
    p: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write phi(q) and the limit curve as CSV.
    #[arg(long)]
    out_curves: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Io(PathBuf, io::Error),
}

impl From<microrate::Error> for CliError {
    fn from(e: microrate::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(..) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "{msg}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "--tol must be positive, got {tol}"
        )))
    }
}

fn write_file<F>(path: &Path, write: F) -> Result<(), CliError>
where
    F: FnOnce(BufWriter<File>) -> io::Result<()>,
{
    let file = File::create(path).map_err(|e| CliError::Io(path.to_owned(), e))?;
    write(BufWriter::new(file)).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn cmd_solve(contract: &ContractArgs, tol: f64) -> Result<serde_json::Value, CliError> {
    check_tol(tol)?;
    let contract = contract.contract()?;
    let sol = solve_q_plus(&contract, tol)?;
    eprintln!("effective annual rate: {:.2}%", 100.0 * sol.annual_rate);
    Ok(json!({
        "q_plus": sol.q_plus,
        "annual_rate": sol.annual_rate,
        "nominal_fraction_a": contract.nominal_fraction().value(),
    }))
}

fn cmd_actuarial(contract: &ContractArgs, p: f64, tol: f64) -> Result<serde_json::Value, CliError> {
    check_tol(tol)?;
    let contract = contract.contract()?;
    let delays = DelayModel::new(p)?;
    let sol = solve_q_plus(&contract, tol)?;
    let rate = actuarial_rate(&contract, &delays, tol)?;
    Ok(json!({
        "q_plus": sol.q_plus,
        "deterministic_rate": sol.annual_rate,
        "actuarial_rate": rate,
        "p": p,
    }))
}

fn cmd_simulate(args: &SimulateArgs) -> Result<serde_json::Value, CliError> {
    let config = SimulationConfig::new(
        args.contract.contract()?,
        DelayModel::new(args.p)?,
        args.trials,
        args.seed,
    )?
    .with_tol(args.tol)?
    .with_bins(args.bins)?;
    if args.threads == Some(0) {
        return Err(CliError::Validation("--threads must be at least 1".into()));
    }

    let result = match args.threads {
        Some(n) => run_simulation_with_threads(&config, n)?,
        None => run_simulation(&config)?,
    };

    if let Some(path) = &args.out_samples {
        write_file(path, |w| write_samples_csv(w, &result.samples))?;
        eprintln!(
            "wrote {} samples to {}",
            result.samples.len(),
            path.display()
        );
    }
    if let Some(path) = &args.out_histogram {
        write_file(path, |w| write_histogram_csv(w, &result.histogram))?;
        eprintln!(
            "wrote {} bins to {}",
            result.histogram.num_bins(),
            path.display()
        );
    }
    let summary = SimulationSummary::from(&result);
    serde_json::to_value(summary).map_err(|e| CliError::Validation(e.to_string()))
}

fn cmd_approx(args: &ApproxArgs) -> Result<serde_json::Value, CliError> {
    check_tol(args.tol)?;
    let a = NominalInterestFraction::new(args.a)?;
    let approx = AsymptoticSolution::solve(
        args.a,
        args.payments,
        args.periods_per_year,
        args.p,
        args.tol,
    )?;
    // the root depends on (a, N) only; any principal will do
    let contract = LoanContract::from_nominal(1000.0, a, args.payments, args.periods_per_year)?;
    let exact = solve_q_plus(&contract, args.tol)?;

    if let Some(path) = &args.out_curves {
        let points = figure_curves(args.a, args.payments, CURVE_POINTS, args.tol)?;
        write_file(path, |w| write_curves_csv(w, &points))?;
        eprintln!("wrote {} curve points to {}", points.len(), path.display());
    }
    Ok(json!({
        "x_plus": approx.x_plus,
        "q_plus_approx": approx.q_plus_approx,
        "q_plus_exact": exact.q_plus,
        "abs_error": (approx.q_plus_approx - exact.q_plus).abs(),
        "actuarial_rate_approx": approx.actuarial_rate_approx,
    }))
}

fn run(cli: &Cli) -> Result<serde_json::Value, CliError> {
    match &cli.command {
        Command::Solve { contract, tol } => cmd_solve(contract, *tol),
        Command::Actuarial { contract, p, tol } => cmd_actuarial(contract, *p, *tol),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Approx(args) => cmd_approx(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
