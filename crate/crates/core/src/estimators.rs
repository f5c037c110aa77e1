//! Monte Carlo simulation of the thermalizing thermometer.
//!
//! The atoms equilibrate with the bath, are isolated, and their total energy
//! `k * epsilon` is read out. For independent atoms `k ~ Binomial(N, p)`, and
//! `beta` is estimated by inverting the mean excitation fraction (which is
//! also the binomial maximum-likelihood estimator).

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};
use crate::exec::Execution;
use crate::rng::RngStream;
use crate::stats::{
    excitation_probability, invert_mean_fraction, InverseTemperature, TwoLevelSpec,
};

/// How the excitation fraction is formed from a count `k` out of `N`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorMode {
    /// `k / N`; counts of `0` or `N` give no finite estimate.
    Raw,
    /// `(k + 1/2) / (N + 1)`, always strictly inside `(0, 1)`.
    #[default]
    Jeffreys,
}

impl EstimatorMode {
    pub fn fraction(self, k: u64, n: u64) -> Option<f64> {
        match self {
            EstimatorMode::Raw if k == 0 || k >= n => None,
            EstimatorMode::Raw => Some(k as f64 / n as f64),
            EstimatorMode::Jeffreys => Some((k as f64 + 0.5) / (n as f64 + 1.0)),
        }
    }
}

impl std::str::FromStr for EstimatorMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw" => Ok(EstimatorMode::Raw),
            "jeffreys" => Ok(EstimatorMode::Jeffreys),
            other => Err(format!(
                "unknown estimator mode `{other}` (expected raw|jeffreys)"
            )),
        }
    }
}

/// The estimates produced by one simulated campaign.
///
/// Sample statistics cover the valid estimates only; `sample_std` uses the
/// `n - 1` divisor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialBatch {
    pub estimates: Vec<f64>,
    pub invalid_count: usize,
    pub sample_mean: f64,
    pub sample_std: f64,
}

impl TrialBatch {
    /// Builds a batch from per-trial outcomes, `None` marking an invalid one.
    ///
    /// Fails if fewer than two outcomes are valid, since no spread can be
    /// computed.
    pub fn from_outcomes<I>(outcomes: I) -> Result<Self>
    where
        I: IntoIterator<Item = Option<f64>>,
    {
        let mut estimates = Vec::new();
        let mut invalid_count = 0;
        for outcome in outcomes {
            match outcome {
                Some(v) => estimates.push(v),
                None => invalid_count += 1,
            }
        }
        if estimates.len() < 2 {
            return Err(ThermoError::EmptyBatch {
                valid: estimates.len(),
                requested: estimates.len() + invalid_count,
            });
        }
        let (sample_mean, sample_std) = mean_and_std(&estimates);
        Ok(Self {
            estimates,
            invalid_count,
            sample_mean,
            sample_std,
        })
    }

    pub fn trials(&self) -> usize {
        self.estimates.len() + self.invalid_count
    }

    pub fn invalid_fraction(&self) -> f64 {
        self.invalid_count as f64 / self.trials() as f64
    }

    pub fn sample_variance(&self) -> f64 {
        self.sample_std * self.sample_std
    }
}

/// Two-pass mean and unbiased standard deviation.
pub(crate) fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Draws the number of excited atoms among `n_atoms` independent atoms.
/// Exact binomial sampling (BTPE for large means, inversion otherwise).
pub fn sample_excited_count<R: Rng + ?Sized>(n_atoms: u64, p: f64, rng: &mut R) -> u64 {
    Binomial::new(n_atoms, p)
        .expect("probability must lie in [0, 1]")
        .sample(rng)
}

/// Estimates `beta` from `k` excited atoms out of `n_atoms`, or `None` when
/// the mode cannot produce a finite estimate.
pub fn estimate_beta_from_count(
    k: u64,
    n_atoms: u64,
    epsilon: f64,
    mode: EstimatorMode,
) -> Option<f64> {
    debug_assert!(k <= n_atoms);
    let p_hat = mode.fraction(k, n_atoms)?;
    invert_mean_fraction(p_hat, epsilon).ok()
}

/// Runs `trials` independent thermalize-isolate-measure cycles at
/// `beta_true`. Trial `i` draws from `RngStream::new(master_seed, i)`.
pub fn run_thermalizing_trials(
    spec: &TwoLevelSpec,
    beta_true: InverseTemperature,
    trials: u64,
    mode: EstimatorMode,
    master_seed: u64,
    exec: Execution,
) -> Result<TrialBatch> {
    if trials < 2 {
        return Err(ThermoError::invalid(
            "trials",
            trials as f64,
            "must be at least 2",
        ));
    }
    let n = spec.n_atoms();
    let eps = spec.epsilon();
    let p = excitation_probability(eps, beta_true);
    let dist = Binomial::new(n, p).expect("excitation probability lies in [0, 1/2]");
    let outcomes = exec.map_indexed(trials, |i| {
        let mut rng = RngStream::new(master_seed, i).rng();
        let k = dist.sample(&mut rng);
        estimate_beta_from_count(k, n, eps, mode)
    });
    TrialBatch::from_outcomes(outcomes)
}
