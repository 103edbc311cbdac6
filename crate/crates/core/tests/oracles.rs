mod oracle;

use microrate::asymptotic::approx_q_plus;
use microrate::loan::{phi_eval, solve_q_plus, yunus_polynomial, yunus_polynomial_eval};
use microrate::stats::summary_stats;
use microrate::stochastic::{actuarial_rate, run_simulation, solve_r};
use microrate::{
    DelayModel, LoanContract, NominalInterestFraction, RepaymentPath, SimulationConfig, DEFAULT_TOL,
};

use oracle::SplitMix64;

#[test]
fn realized_rate_with_one_late_payment_matches_grid_scan() {
    let c = LoanContract::canonical();
    let mut gaps = vec![1; 50];
    gaps[0] = 2;
    let want = oracle::grid_scan_rate(1000.0, 22.0, 52, &gaps, 0.2);
    // 40-digit reference for this path
    assert!((want - 0.18974343556367916).abs() < 1e-9, "{want}");
    let got = solve_r(&c, &RepaymentPath::from_gaps(gaps).unwrap(), DEFAULT_TOL).unwrap();
    assert!((got - want).abs() < 1e-9, "{got} vs {want}");
}

#[test]
fn realized_rate_matches_grid_scan_on_random_paths() {
    let c = LoanContract::canonical();
    let mut rng = SplitMix64::new(2024);
    for _ in 0..10 {
        let gaps: Vec<u64> = (0..50)
            .map(|_| oracle::geometric_by_trials(0.8, &mut rng))
            .collect();
        let want = oracle::grid_scan_rate(1000.0, 22.0, 52, &gaps, 0.2);
        let got = solve_r(&c, &RepaymentPath::from_gaps(gaps).unwrap(), DEFAULT_TOL).unwrap();
        assert!((got - want).abs() < 1e-9);
    }
}

#[test]
fn simulation_mean_matches_independent_simulation() {
    let c = LoanContract::canonical();
    let cfg = SimulationConfig::new(c, DelayModel::new(0.95).unwrap(), 100_000, 42).unwrap();
    let res = run_simulation(&cfg).unwrap();

    let reference = oracle::independent_simulation(1000.0, 22.0, 50, 52, 0.95, 100_000, 42);
    let (ref_mean, _) = oracle::mean_and_std_error(&reference);
    let se = res.stats.std_dev / (res.samples.len() as f64).sqrt();
    assert!(
        (res.stats.mean - ref_mean).abs() < 3.0 * se,
        "library {} vs reference {ref_mean}, se {se}",
        res.stats.mean
    );
}

#[test]
fn gaussian_raw_kurtosis_is_three() {
    let mut rng = SplitMix64::new(7);
    let xs: Vec<f64> = (0..1_000_000).map(|_| rng.next_gaussian()).collect();
    let st = summary_stats(&xs).unwrap();
    assert!(
        (st.kurtosis.unwrap() - 3.0).abs() < 0.05,
        "{:?}",
        st.kurtosis
    );
    assert!(st.skewness.unwrap().abs() < 0.01);
}

#[test]
fn actuarial_rate_satisfies_mgf_identity() {
    let c = LoanContract::canonical();
    let q_plus = solve_q_plus(&c, DEFAULT_TOL).unwrap().q_plus;
    for (i, &p) in [0.8, 0.9, 0.99].iter().enumerate() {
        let r_bar = actuarial_rate(&c, &DelayModel::new(p).unwrap(), DEFAULT_TOL).unwrap();
        let mut rng = SplitMix64::new(100 + i as u64);
        let xs: Vec<f64> = (0..1_000_000)
            .map(|_| (-(r_bar / 52.0) * oracle::geometric_by_trials(p, &mut rng) as f64).exp())
            .collect();
        let (mean, se) = oracle::mean_and_std_error(&xs);
        assert!(
            (mean - q_plus).abs() < 3.0 * se,
            "p={p}: {mean} vs {q_plus} (se {se})"
        );
    }
}

#[test]
fn residual_form_equals_twenty_phi() {
    let c = LoanContract::canonical();
    let a = NominalInterestFraction::new(0.1).unwrap();
    let mut rng = SplitMix64::new(1);
    for _ in 0..100 {
        let q = rng.next_open01();
        let direct = 22.0 * q.powi(51) - 1022.0 * q + 1000.0;
        let from_residual = (1.0 - q) * yunus_polynomial_eval(&c, q);
        let scaled_phi = 20.0 * phi_eval(a, 50, q);
        let scale = direct.abs().max(scaled_phi.abs());
        assert!((scaled_phi - direct).abs() <= 1e-9 * scale);
        assert!((from_residual - scaled_phi).abs() <= 1e-9 * scale);
        assert!((yunus_polynomial(&c, q) - direct).abs() <= 1e-9 * scale);
    }
}

#[test]
fn asymptotic_error_decreases_with_payments() {
    let a = NominalInterestFraction::new(0.1).unwrap();
    let errors: Vec<f64> = [50, 200, 1000, 5000]
        .iter()
        .map(|&n| {
            let c = LoanContract::from_nominal(1000.0, a, n, 52).unwrap();
            let exact = solve_q_plus(&c, DEFAULT_TOL).unwrap().q_plus;
            (approx_q_plus(0.1, n, DEFAULT_TOL).unwrap() - exact).abs()
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}

#[test]
fn sampled_rates_stay_below_deterministic_rate() {
    let c = LoanContract::canonical();
    let det = solve_q_plus(&c, DEFAULT_TOL).unwrap().annual_rate;
    let cfg = SimulationConfig::new(c, DelayModel::new(0.7).unwrap(), 5_000, 3).unwrap();
    let res = run_simulation(&cfg).unwrap();
    assert!(res.samples.iter().all(|&r| r > 0.0 && r <= det + 1e-12));
}
