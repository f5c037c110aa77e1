//! Monte Carlo checks of the estimators against their analytic precision.

use std::f64::consts::PI;

use thermometry::estimators::{run_thermalizing_trials, EstimatorMode};
use thermometry::interferometry::{
    dephasing_visibility, measure_fringe_visibility, run_interferometer_trials, run_noon_protocol,
    run_sn_protocol, sigma_beta_sn_theory, sigma_phi_noon_theory, BathMode, BathSpec,
    ProtocolConfig,
};
use thermometry::stats::{excitation_probability, shot_noise_sigma_beta, thermal_summary};
use thermometry::{Execution, InverseTemperature, RngStream, TwoLevelSpec};

/// Bias guard `|E[beta_hat] - beta| <= C / N`, frozen from the exact
/// expectation (max `N * bias` is about 0.23 at `beta epsilon = 3`, N = 100).
const BIAS_C: f64 = 0.5;

fn beta(b: f64) -> InverseTemperature {
    InverseTemperature::new(b).unwrap()
}

fn spec(n: u64) -> TwoLevelSpec {
    TwoLevelSpec::new(n, 1.0).unwrap()
}

/// Exact mean of the Jeffreys estimator by summing over the binomial pmf.
fn exact_jeffreys_mean(n: u64, x: f64) -> f64 {
    let p = excitation_probability(1.0, beta(x));
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_pmf = n as f64 * lq;
    let mut mean = 0.0;
    for k in 0..=n {
        if k > 0 {
            log_pmf += ((n - k + 1) as f64).ln() - (k as f64).ln() + lp - lq;
        }
        let p_hat = (k as f64 + 0.5) / (n as f64 + 1.0);
        mean += log_pmf.exp() * (1.0 / p_hat - 1.0).ln();
    }
    mean
}

#[test]
fn thermalizing_std_matches_shot_noise() {
    let batch = run_thermalizing_trials(
        &spec(100),
        beta(1.0),
        100_000,
        EstimatorMode::Jeffreys,
        1,
        Execution::default(),
    )
    .unwrap();
    let theory = shot_noise_sigma_beta(&spec(100), beta(1.0));
    assert!((batch.sample_std / theory - 1.0).abs() < 0.05);
    assert_eq!(batch.invalid_count, 0);
}

#[test]
fn quadrupling_atoms_halves_the_spread() {
    let run = |n| {
        run_thermalizing_trials(
            &spec(n),
            beta(1.0),
            20_000,
            EstimatorMode::Jeffreys,
            2,
            Execution::default(),
        )
        .unwrap()
        .sample_std
    };
    let ratio = run(400) / run(100);
    assert!((ratio / 0.5 - 1.0).abs() < 0.10, "{ratio}");
}

#[test]
fn cramer_rao_compliance_and_saturation() {
    for n in [100u64, 1000] {
        for x in [0.2, 1.0, 2.0, 3.0] {
            let batch = run_thermalizing_trials(
                &spec(n),
                beta(x),
                20_000,
                EstimatorMode::Jeffreys,
                3,
                Execution::default(),
            )
            .unwrap();
            let fisher = thermal_summary(&spec(n), beta(x)).fisher_info;
            assert!(batch.sample_variance() >= 0.95 / fisher, "n={n} x={x}");
            let ratio = batch.sample_std / shot_noise_sigma_beta(&spec(n), beta(x));
            assert!((0.95..=1.10).contains(&ratio), "n={n} x={x}: {ratio}");
        }
    }
}

#[test]
fn bias_decays_like_one_over_n() {
    for n in [100u64, 400, 1600] {
        for x in [0.2, 1.0, 3.0] {
            let exact_bias = exact_jeffreys_mean(n, x) - x;
            assert!(
                exact_bias.abs() <= BIAS_C / n as f64,
                "n={n} x={x}: {exact_bias}"
            );

            let trials = 20_000;
            let batch = run_thermalizing_trials(
                &spec(n),
                beta(x),
                trials,
                EstimatorMode::Jeffreys,
                4,
                Execution::default(),
            )
            .unwrap();
            let allowed = 3.0 * batch.sample_std / (trials as f64).sqrt() + BIAS_C / n as f64;
            assert!((batch.sample_mean - x).abs() <= allowed, "n={n} x={x}");
        }
    }
}

#[test]
fn trial_batches_do_not_depend_on_schedule() {
    let seq = run_thermalizing_trials(
        &spec(64),
        beta(0.7),
        5_000,
        EstimatorMode::Raw,
        99,
        Execution::Sequential,
    )
    .unwrap();
    let par = run_thermalizing_trials(
        &spec(64),
        beta(0.7),
        5_000,
        EstimatorMode::Raw,
        99,
        Execution::Parallel,
    )
    .unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq.sample_std.to_bits(), par.sample_std.to_bits());

    let bath = BathSpec::with_theta(500, 1.0, beta(1.0), 0.001).unwrap();
    let config = ProtocolConfig::noon(bath, 4, 50, BathMode::SampledM);
    assert_eq!(
        run_interferometer_trials(&config, 3_000, 5, Execution::Sequential).unwrap(),
        run_interferometer_trials(&config, 3_000, 5, Execution::Parallel).unwrap()
    );
}

#[test]
fn sn_interferometer_matches_theory() {
    let bath = BathSpec::with_theta(100, 1.0, beta(3f64.ln()), PI / 200.0).unwrap();
    let config = ProtocolConfig::shot_noise(bath, 10_000, BathMode::FixedM);
    let batch = run_interferometer_trials(&config, 1_000, 6, Execution::default()).unwrap();
    let ratio = batch.beta.sample_std / sigma_beta_sn_theory(&bath, 10_000);
    assert!((ratio - 1.0).abs() < 0.15, "{ratio}");
}

#[test]
fn single_atom_noon_reproduces_sn_trial_by_trial() {
    let bath = BathSpec::with_theta(100, 1.0, beta(1.0), PI / 200.0).unwrap();
    for i in 0..200 {
        let stream = RngStream::new(12, i);
        assert_eq!(
            run_sn_protocol(&bath, 500, BathMode::FixedM, stream).unwrap(),
            run_noon_protocol(&bath, 1, 500, BathMode::FixedM, stream).unwrap()
        );
    }
}

#[test]
fn noon_spread_falls_as_one_over_n() {
    let bath = BathSpec::with_theta(100, 1.0, beta(1.0), (PI - 1e-3) / 800.0).unwrap();
    let run = |n| {
        let config = ProtocolConfig::noon(bath, n, 5_000, BathMode::FixedM);
        run_interferometer_trials(&config, 1_000, 7, Execution::default()).unwrap()
    };
    let (two, eight) = (run(2), run(8));
    let ratio = eight.beta.sample_std / two.beta.sample_std;
    assert!((ratio / 0.25 - 1.0).abs() < 0.15, "{ratio}");
}

#[test]
fn noon_phase_spread_respects_cramer_rao() {
    let m = 1_000;
    let bath = BathSpec::with_theta(m, 1.0, beta(1.0), (PI - 1e-3) / (16.0 * m as f64)).unwrap();
    for n in [4u64, 8, 16] {
        let reps = 400;
        let config = ProtocolConfig::noon(bath, n, reps, BathMode::FixedM);
        let batch = run_interferometer_trials(&config, 2_000, 8, Execution::default()).unwrap();
        assert!(
            batch.phase.sample_std >= 0.95 * sigma_phi_noon_theory(n, reps),
            "n={n}"
        );
    }
}

#[test]
fn resampled_bath_dephases_the_fringe() {
    let bath = BathSpec::with_theta(50, 1.0, beta(3f64.ln()), 0.05).unwrap();
    let fringe = measure_fringe_visibility(&bath, 3, 100_000, 9, Execution::default()).unwrap();
    let expected = dephasing_visibility(&bath, 3);
    assert!(expected < 0.95);
    assert!(
        (fringe.visibility / expected - 1.0).abs() < 0.02,
        "{} vs {expected}",
        fringe.visibility
    );
}
