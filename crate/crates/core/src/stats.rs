//! Closed-form thermal statistics of `N` independent two-level atoms with
//! level splitting `epsilon`, and the precision bounds that follow from them.
//!
//! Everything is evaluated through the dimensionless product `x = beta *
//! epsilon`, which is nonnegative. Exponentials are only ever taken of `-x`,
//! so nothing overflows for `x` up to (and well beyond) 700.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};

/// The thermometer ensemble: `n_atoms` two-level atoms, each with Hamiltonian
/// `epsilon |e><e|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelSpec {
    n_atoms: u64,
    epsilon: f64,
}

impl TwoLevelSpec {
    pub fn new(n_atoms: u64, epsilon: f64) -> Result<Self> {
        if n_atoms == 0 {
            return Err(ThermoError::invalid("n_atoms", 0.0, "must be at least 1"));
        }
        check_epsilon(epsilon)?;
        Ok(Self { n_atoms, epsilon })
    }

    pub fn n_atoms(&self) -> u64 {
        self.n_atoms
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(ThermoError::invalid(
            "epsilon",
            epsilon,
            "must be finite and > 0",
        ))
    }
}

/// Inverse temperature `beta = 1 / (k_B T)`, restricted to `beta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub const INFINITE_TEMPERATURE: Self = Self(0.0);

    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta >= 0.0 {
            Ok(Self(beta))
        } else {
            Err(ThermoError::invalid(
                "beta",
                beta,
                "must be finite and >= 0",
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for InverseTemperature {
    type Error = ThermoError;

    fn try_from(beta: f64) -> Result<Self> {
        Self::new(beta)
    }
}

impl From<InverseTemperature> for f64 {
    fn from(beta: InverseTemperature) -> f64 {
        beta.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalSummary {
    pub log_z: f64,
    pub mean_energy: f64,
    pub energy_variance: f64,
    /// Mean energy per atom.
    pub eps_bar: f64,
    /// `|d eps_bar / d beta|`.
    pub eps_prime: f64,
    pub fisher_info: f64,
}

/// Logistic pieces at `x >= 0`: `(p, p * (1 - p))` with `p = 1 / (1 + e^x)`.
fn logistic(x: f64) -> (f64, f64) {
    debug_assert!(x >= 0.0);
    let t = (-x).exp();
    let p = t / (1.0 + t);
    let pq = t / ((1.0 + t) * (1.0 + t));
    (p, pq)
}

/// Single-atom excited-state population `1 / (1 + e^{beta epsilon})`.
///
/// Lies in `(0, 1/2]` and decreases strictly with `beta` (until it
/// underflows to zero at astronomically large `beta * epsilon`).
pub fn excitation_probability(epsilon: f64, beta: InverseTemperature) -> f64 {
    debug_assert!(epsilon > 0.0);
    logistic(beta.value() * epsilon).0
}

pub fn thermal_summary(spec: &TwoLevelSpec, beta: InverseTemperature) -> ThermalSummary {
    let n = spec.n_atoms as f64;
    let eps = spec.epsilon;
    let x = beta.value() * eps;
    let (p, pq) = logistic(x);
    let eps_bar = eps * p;
    let eps_prime = eps * eps * pq;
    let energy_variance = n * eps_prime;
    ThermalSummary {
        log_z: n * (-x).exp().ln_1p(),
        mean_energy: n * eps_bar,
        energy_variance,
        eps_bar,
        eps_prime,
        fisher_info: energy_variance,
    }
}

/// Best precision of a thermalizing thermometer, `1 / sqrt(N * eps_prime)`,
/// which is `1 / sqrt(F(beta))`.
pub fn shot_noise_sigma_beta(spec: &TwoLevelSpec, beta: InverseTemperature) -> f64 {
    1.0 / thermal_summary(spec, beta).fisher_info.sqrt()
}

/// Error propagation `sigma_beta = sigma_eps / eps_prime`.
pub fn propagate_uncertainty(sigma_eps: f64, eps_prime: f64) -> Result<f64> {
    if eps_prime == 0.0 {
        return Err(ThermoError::DegenerateSensitivity("eps_prime"));
    }
    Ok(sigma_eps / eps_prime.abs())
}

/// Inverts `p = 1 / (1 + e^{beta epsilon})`, giving `ln(1/p - 1) / epsilon`.
///
/// Negative for `p_hat > 1/2`; clamping is left to the caller.
pub fn invert_mean_fraction(p_hat: f64, epsilon: f64) -> Result<f64> {
    if p_hat <= 0.0 || p_hat >= 1.0 || p_hat.is_nan() {
        return Err(ThermoError::UnboundedEstimate { p_hat });
    }
    Ok(((-p_hat).ln_1p() - p_hat.ln()) / epsilon)
}

/// Cramer-Rao bound `1 / sqrt(repetitions * fisher_info)`.
pub fn cr_bound_sigma(fisher_info: f64, repetitions: u64) -> Result<f64> {
    if fisher_info == 0.0 {
        return Err(ThermoError::DegenerateSensitivity("fisher_info"));
    }
    if fisher_info.is_nan() || fisher_info < 0.0 {
        return Err(ThermoError::invalid(
            "fisher_info",
            fisher_info,
            "must be > 0",
        ));
    }
    if repetitions == 0 {
        return Err(ThermoError::invalid(
            "repetitions",
            0.0,
            "must be at least 1",
        ));
    }
    Ok(1.0 / (repetitions as f64 * fisher_info).sqrt())
}

/// Shot-noise precision of a flux-limited thermometer,
/// `(atom_rate * integration_time)^{-1/2}`.
pub fn doppler_precision(atom_rate: f64, integration_time: f64) -> f64 {
    debug_assert!(atom_rate > 0.0 && integration_time > 0.0);
    (atom_rate * integration_time).sqrt().recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn b(beta: f64) -> InverseTemperature {
        InverseTemperature::new(beta).unwrap()
    }

    #[test]
    fn excitation_probability_examples() {
        assert_eq!(excitation_probability(1.0, b(0.0)), 0.5);
        assert!(excitation_probability(1.0, b(100.0)) < 1e-12);
        assert_relative_eq!(
            excitation_probability(1.0, b(3f64.ln())),
            0.25,
            max_relative = 1e-15
        );
    }

    #[test]
    fn summary_at_symmetry_point() {
        let s = thermal_summary(&TwoLevelSpec::new(1, 1.0).unwrap(), b(0.0));
        assert_relative_eq!(s.log_z, 2f64.ln(), max_relative = 1e-15);
        assert_eq!(s.mean_energy, 0.5);
        assert_eq!(s.energy_variance, 0.25);

        let s = thermal_summary(&TwoLevelSpec::new(10, 1.0).unwrap(), b(0.0));
        assert_eq!(s.mean_energy, 5.0);
        assert_eq!(s.energy_variance, 2.5);
    }

    #[test]
    fn summary_survives_huge_beta_epsilon() {
        let s = thermal_summary(&TwoLevelSpec::new(1000, 2.0).unwrap(), b(350.0));
        for v in [
            s.log_z,
            s.mean_energy,
            s.energy_variance,
            s.eps_bar,
            s.eps_prime,
        ] {
            assert!(v.is_finite() && v >= 0.0);
        }
        let s = thermal_summary(&TwoLevelSpec::new(1, 1.0).unwrap(), b(1e6));
        assert_eq!(s.mean_energy, 0.0);
        assert!(shot_noise_sigma_beta(&TwoLevelSpec::new(1, 1.0).unwrap(), b(1e6)).is_infinite());
    }

    #[test]
    fn shot_noise_examples() {
        let one = TwoLevelSpec::new(1, 1.0).unwrap();
        assert_eq!(shot_noise_sigma_beta(&one, b(0.0)), 2.0);
        assert_relative_eq!(
            shot_noise_sigma_beta(&TwoLevelSpec::new(100, 1.0).unwrap(), b(0.0)),
            0.2,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            shot_noise_sigma_beta(&one, b(3f64.ln())),
            1.0 / (3.0f64 / 16.0).sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn propagation_examples() {
        assert_eq!(propagate_uncertainty(0.25, 0.25).unwrap(), 1.0);
        assert_eq!(propagate_uncertainty(0.5, 0.25).unwrap(), 2.0);
        assert!(matches!(
            propagate_uncertainty(0.5, 0.0),
            Err(ThermoError::DegenerateSensitivity(_))
        ));

        // per-particle energy spread sqrt(eps_prime / N) reproduces the shot-noise bound
        let spec = TwoLevelSpec::new(4, 1.0).unwrap();
        let s = thermal_summary(&spec, b(0.0));
        let sigma_eps = (s.eps_prime / 4.0).sqrt();
        let sigma = propagate_uncertainty(sigma_eps, s.eps_prime).unwrap();
        assert_relative_eq!(sigma, 1.0, max_relative = 1e-15);
        assert_relative_eq!(
            sigma,
            shot_noise_sigma_beta(&spec, b(0.0)),
            max_relative = 1e-15
        );
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(invert_mean_fraction(0.5, 1.0).unwrap(), 0.0);
        assert_relative_eq!(
            invert_mean_fraction(0.25, 1.0).unwrap(),
            3f64.ln(),
            max_relative = 1e-15
        );
        assert!(invert_mean_fraction(0.75, 1.0).unwrap() < 0.0);
        for p in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                invert_mean_fraction(p, 1.0),
                Err(ThermoError::UnboundedEstimate { .. })
            ));
        }
    }

    #[test]
    fn cr_bound_examples() {
        assert_eq!(cr_bound_sigma(0.25, 1).unwrap(), 2.0);
        assert_eq!(cr_bound_sigma(0.25, 4).unwrap(), 1.0);
        let f = thermal_summary(&TwoLevelSpec::new(50, 1.0).unwrap(), b(1.0)).fisher_info;
        let e = std::f64::consts::E;
        assert_relative_eq!(
            cr_bound_sigma(f, 1).unwrap(),
            1.0 / (50.0 * e / ((1.0 + e) * (1.0 + e))).sqrt(),
            max_relative = 1e-14
        );
        assert!(matches!(
            cr_bound_sigma(0.0, 1),
            Err(ThermoError::DegenerateSensitivity(_))
        ));
        assert!(cr_bound_sigma(1.0, 0).is_err());
    }

    #[test]
    fn doppler_examples() {
        assert_relative_eq!(
            doppler_precision(1e15, 1.0),
            10f64.powf(-7.5),
            max_relative = 1e-12
        );
        assert_eq!(doppler_precision(1.0, 1.0), 1.0);
        assert_eq!(doppler_precision(4.0, 1.0), 0.5);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(TwoLevelSpec::new(0, 1.0).is_err());
        assert!(TwoLevelSpec::new(1, 0.0).is_err());
        assert!(TwoLevelSpec::new(1, f64::NAN).is_err());
        assert!(InverseTemperature::new(-1e-9).is_err());
        assert!(InverseTemperature::new(f64::INFINITY).is_err());
        assert!(serde_json::from_str::<InverseTemperature>("-1.0").is_err());
    }
}
