use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};
use crate::stats::{shot_noise_sigma_beta, thermal_summary, InverseTemperature, TwoLevelSpec};

/// Precision to which the temperature of an isolated `m_atoms` bath is
/// itself defined: the thermalizing bound with `N` replaced by `M`.
pub fn bath_intrinsic_sigma(m_atoms: u64, epsilon: f64, beta: InverseTemperature) -> Result<f64> {
    Ok(shot_noise_sigma_beta(
        &TwoLevelSpec::new(m_atoms, epsilon)?,
        beta,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    ShotNoise,
    Heisenberg,
}

/// Smallest thermometer whose precision matches the bath's own: `N = M` at
/// the shot-noise limit, `N = ceil(sqrt(M))` at the Heisenberg limit.
pub fn matched_thermometer_size(m_atoms: u64, regime: Regime) -> u64 {
    match regime {
        Regime::ShotNoise => m_atoms,
        Regime::Heisenberg => {
            let r = m_atoms.isqrt();
            if r * r == m_atoms {
                r
            } else {
                r + 1
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig1Row {
    pub beta_eps: f64,
    pub eps_bar_over_eps: f64,
    /// `sqrt(N) * sigma_beta * epsilon`, independent of `N`.
    pub scaled_sigma_beta: f64,
}

/// Energy per atom and scaled thermalizing precision along a `beta` grid.
pub fn fig1_curves(epsilon: f64, beta_grid: &[f64]) -> Result<Vec<Fig1Row>> {
    if beta_grid.is_empty() {
        return Err(ThermoError::InvalidPlan("empty beta grid".into()));
    }
    let spec = TwoLevelSpec::new(1, epsilon)?;
    beta_grid
        .iter()
        .map(|&b| {
            let beta = InverseTemperature::new(b)?;
            let s = thermal_summary(&spec, beta);
            Ok(Fig1Row {
                beta_eps: b * epsilon,
                eps_bar_over_eps: s.eps_bar / epsilon,
                scaled_sigma_beta: shot_noise_sigma_beta(&spec, beta) * epsilon,
            })
        })
        .collect()
}
