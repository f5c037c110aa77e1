use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law, ScalingFit};
use crate::error::{Result, ThermoError};
use crate::estimators::{run_thermalizing_trials, EstimatorMode};
use crate::exec::Execution;
use crate::interferometry::{
    run_interferometer_trials, sigma_beta_noon_theory, sigma_beta_sn_theory, sigma_phi_noon_theory,
    BathMode, BathSpec, ProtocolConfig,
};
use crate::rng::derive_seed;
use crate::stats::{check_epsilon, shot_noise_sigma_beta, InverseTemperature, TwoLevelSpec};

/// What is swept. `n` is the atom count for the thermalizing and NOON
/// protocols and the number of single-atom shots for the shot-noise one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "snake_case")]
pub enum Protocol {
    Thermalizing {
        epsilon: f64,
        beta_true: InverseTemperature,
        estimator: EstimatorMode,
    },
    ShotNoise {
        bath: BathSpec,
        bath_mode: BathMode,
        reference_phase: f64,
    },
    Noon {
        bath: BathSpec,
        bath_mode: BathMode,
        repetitions: u64,
        reference_phase: f64,
    },
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Thermalizing { .. } => "thermalizing",
            Protocol::ShotNoise { .. } => "sn",
            Protocol::Noon { .. } => "noon",
        }
    }

    fn interferometer(&self, n: u64) -> Option<ProtocolConfig> {
        match *self {
            Protocol::Thermalizing { .. } => None,
            Protocol::ShotNoise {
                bath,
                bath_mode,
                reference_phase,
            } => Some(
                ProtocolConfig::shot_noise(bath, n, bath_mode)
                    .with_reference_phase(reference_phase),
            ),
            Protocol::Noon {
                bath,
                bath_mode,
                repetitions,
                reference_phase,
            } => Some(
                ProtocolConfig::noon(bath, n, repetitions, bath_mode)
                    .with_reference_phase(reference_phase),
            ),
        }
    }

    fn sigma_beta_theory(&self, n: u64) -> Result<f64> {
        Ok(match self {
            Protocol::Thermalizing {
                epsilon, beta_true, ..
            } => shot_noise_sigma_beta(&TwoLevelSpec::new(n, *epsilon)?, *beta_true),
            Protocol::ShotNoise { bath, .. } => sigma_beta_sn_theory(bath, n),
            Protocol::Noon {
                bath, repetitions, ..
            } => sigma_beta_noon_theory(bath, n, *repetitions),
        })
    }

    fn sigma_phi_theory(&self, n: u64) -> Option<f64> {
        match self {
            Protocol::Thermalizing { .. } => None,
            Protocol::ShotNoise { .. } => Some(sigma_phi_noon_theory(1, n)),
            Protocol::Noon { repetitions, .. } => Some(sigma_phi_noon_theory(n, *repetitions)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub protocol: Protocol,
    pub n_values: Vec<u64>,
    pub trials_per_n: u64,
    pub master_seed: u64,
}

impl SweepPlan {
    /// Checks the whole plan, including the phase window at every `n`, before
    /// any trial is run.
    pub fn validate(&self) -> Result<()> {
        if self.n_values.len() < 4 {
            return Err(ThermoError::InvalidPlan(format!(
                "need at least 4 n values for a scaling fit, got {}",
                self.n_values.len()
            )));
        }
        if self.n_values[0] == 0 {
            return Err(ThermoError::InvalidPlan("n values must be positive".into()));
        }
        if let Some(w) = self.n_values.windows(2).find(|w| w[1] <= w[0]) {
            return Err(ThermoError::InvalidPlan(format!(
                "n values must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if self.trials_per_n < 2 {
            return Err(ThermoError::InvalidPlan(
                "trials per n must be at least 2".into(),
            ));
        }
        if let Protocol::Thermalizing { epsilon, .. } = self.protocol {
            check_epsilon(epsilon)?;
        }
        for &n in &self.n_values {
            if let Some(config) = self.protocol.interferometer(n) {
                config.validate()?;
            }
        }
        Ok(())
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: u64,
    pub sigma_beta_empirical: f64,
    pub sigma_beta_theory: f64,
    pub invalid_fraction: f64,
    pub trials: u64,
    pub mean_beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_phi_empirical: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_phi_theory: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
    pub fit: Option<ScalingFit>,
}

/// Runs every point of the plan and fits `sigma_beta` against `n`.
///
/// Point `n` uses master seed `derive_seed(plan.master_seed, n)`, so the
/// report is a pure function of the plan.
pub fn run_sweep(plan: &SweepPlan, exec: Execution) -> Result<SweepReport> {
    plan.validate()?;
    let mut points = Vec::with_capacity(plan.n_values.len());
    for &n in &plan.n_values {
        let seed = derive_seed(plan.master_seed, n);
        let trials = plan.trials_per_n;
        let all_invalid = |e: ThermoError| match e {
            ThermoError::EmptyBatch { .. } => ThermoError::AllInvalid { n, trials },
            other => other,
        };
        let (beta, phase) = match &plan.protocol {
            Protocol::Thermalizing {
                epsilon,
                beta_true,
                estimator,
            } => {
                let spec = TwoLevelSpec::new(n, *epsilon)?;
                let batch =
                    run_thermalizing_trials(&spec, *beta_true, trials, *estimator, seed, exec)
                        .map_err(all_invalid)?;
                (batch, None)
            }
            protocol => {
                let config = protocol
                    .interferometer(n)
                    .expect("interferometric protocol");
                let batch =
                    run_interferometer_trials(&config, trials, seed, exec).map_err(all_invalid)?;
                (batch.beta, Some(batch.phase))
            }
        };
        points.push(SweepPoint {
            n,
            sigma_beta_empirical: beta.sample_std,
            sigma_beta_theory: plan.protocol.sigma_beta_theory(n)?,
            invalid_fraction: beta.invalid_fraction(),
            trials,
            mean_beta: beta.sample_mean,
            sigma_phi_empirical: phase.map(|p| p.sample_std),
            sigma_phi_theory: plan.protocol.sigma_phi_theory(n),
        });
    }
    let fit_points: Vec<(u64, f64)> = points
        .iter()
        .map(|p| (p.n, p.sigma_beta_empirical))
        .collect();
    let fit = fit_power_law(&fit_points)?;
    Ok(SweepReport {
        points,
        fit: Some(fit),
    })
}
