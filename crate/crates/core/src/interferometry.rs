//! The non-thermalizing thermometer: an atomic interferometer with the bath
//! in one arm.
//!
//! Each thermometer atom that passes the bath arm picks up the phase
//! `phi_B = theta * m`, with `theta = alpha * tau` and `m` the number of
//! excited bath atoms. In the shot-noise protocol `N` single atoms are sent
//! through one at a time. In the NOON protocol all `N` atoms travel together
//! in the state `(|N,0> + i|0,N>)/sqrt(2)` and the bath branch acquires
//! `N * phi_B`. Both interferometers are closed with the splitter
//! `(1/sqrt 2)[[1, i], [i, 1]]`, which makes the designated detector fire
//! with probability `cos^2((N phi_B + chi) / 2)`, where `chi` is an optional
//! fixed reference phase on the bath arm (zero by default).
//!
//! The phase is inverted through `arccos`, so the total phase must stay
//! inside `[0, pi)`: configurations are validated against
//! `chi + N * theta * M <= pi - 1e-3` before anything is simulated.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Bernoulli, Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Result, ThermoError};
use crate::estimators::{EstimatorMode, TrialBatch};
use crate::exec::Execution;
use crate::rng::RngStream;
use crate::stats::{check_epsilon, excitation_probability, InverseTemperature};

/// Safety margin below `pi` for the total interferometric phase.
pub const PHASE_WINDOW_MARGIN: f64 = 1e-3;

/// The bath: `m_atoms` two-level atoms at `beta_true`, coupled to each
/// thermometer atom with strength `alpha` for a time `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    m_atoms: u64,
    epsilon: f64,
    beta_true: InverseTemperature,
    alpha: f64,
    tau: f64,
}

impl BathSpec {
    pub fn new(
        m_atoms: u64,
        epsilon: f64,
        beta_true: InverseTemperature,
        alpha: f64,
        tau: f64,
    ) -> Result<Self> {
        if m_atoms == 0 {
            return Err(ThermoError::invalid("m_atoms", 0.0, "must be at least 1"));
        }
        check_epsilon(epsilon)?;
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(ThermoError::invalid(
                "alpha",
                alpha,
                "must be finite and > 0",
            ));
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(ThermoError::invalid("tau", tau, "must be finite and > 0"));
        }
        Ok(Self {
            m_atoms,
            epsilon,
            beta_true,
            alpha,
            tau,
        })
    }

    /// Convenience constructor with `alpha = theta`, `tau = 1`.
    pub fn with_theta(
        m_atoms: u64,
        epsilon: f64,
        beta_true: InverseTemperature,
        theta: f64,
    ) -> Result<Self> {
        Self::new(m_atoms, epsilon, beta_true, theta, 1.0)
    }

    pub fn m_atoms(&self) -> u64 {
        self.m_atoms
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn beta_true(&self) -> InverseTemperature {
        self.beta_true
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Phase per excited bath atom, `alpha * tau`.
    pub fn theta(&self) -> f64 {
        self.alpha * self.tau
    }

    pub fn excitation_probability(&self) -> f64 {
        excitation_probability(self.epsilon, self.beta_true)
    }

    /// `<m> = M / (1 + e^{beta epsilon})`.
    pub fn mean_excited(&self) -> f64 {
        self.m_atoms as f64 * self.excitation_probability()
    }

    /// `|d<m>/d beta| = M epsilon e^{x} / (1 + e^{x})^2`.
    pub fn mean_excited_slope(&self) -> f64 {
        let t = (-self.beta_true.value() * self.epsilon).exp();
        self.m_atoms as f64 * self.epsilon * t / ((1.0 + t) * (1.0 + t))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathMode {
    /// Isolated bath: `m` is the rounded thermal mean and never changes.
    #[default]
    FixedM,
    /// `m` is redrawn from `Binomial(M, p)` for every trial.
    SampledM,
}

impl std::str::FromStr for BathMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fixed" | "fixed_m" => Ok(BathMode::FixedM),
            "sampled" | "sampled_m" => Ok(BathMode::SampledM),
            other => Err(format!(
                "unknown bath mode `{other}` (expected fixed|sampled)"
            )),
        }
    }
}

pub fn bath_excitation_draw<R: Rng + ?Sized>(bath: &BathSpec, mode: BathMode, rng: &mut R) -> u64 {
    match mode {
        BathMode::FixedM => bath.mean_excited().round() as u64,
        BathMode::SampledM => Binomial::new(bath.m_atoms, bath.excitation_probability())
            .expect("excitation probability lies in [0, 1/2]")
            .sample(rng),
    }
}

/// Probability of the designated port for one atom, `cos^2(phi / 2)`.
pub fn single_port_probability(phi: f64) -> f64 {
    let c = (0.5 * phi).cos();
    c * c
}

/// Probability that all `n_atoms` of a NOON state exit at the designated
/// port, `cos^2(N phi_B / 2)`. The other `A_N` outcome has the complement.
pub fn noon_outcome_probability(n_atoms: u64, phi_b: f64) -> f64 {
    single_port_probability(n_atoms as f64 * phi_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferometerOutcome {
    pub m_realized: u64,
    pub phi_b: f64,
    pub counts_port_a: u64,
    pub shots: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    pub phi_hat: f64,
    pub m_hat: f64,
    /// `None` when `m_hat` falls outside `(0, M)`.
    pub beta_hat: Option<f64>,
}

/// One interferometric thermometry configuration. The shot-noise protocol is
/// the special case `atoms_per_shot = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub bath: BathSpec,
    pub atoms_per_shot: u64,
    pub shots: u64,
    pub mode: BathMode,
    pub reference_phase: f64,
}

impl ProtocolConfig {
    pub fn shot_noise(bath: BathSpec, n_shots: u64, mode: BathMode) -> Self {
        Self {
            bath,
            atoms_per_shot: 1,
            shots: n_shots,
            mode,
            reference_phase: 0.0,
        }
    }

    pub fn noon(bath: BathSpec, n_atoms: u64, repetitions: u64, mode: BathMode) -> Self {
        Self {
            bath,
            atoms_per_shot: n_atoms,
            shots: repetitions,
            mode,
            reference_phase: 0.0,
        }
    }

    pub fn with_reference_phase(mut self, chi: f64) -> Self {
        self.reference_phase = chi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms_per_shot == 0 {
            return Err(ThermoError::invalid(
                "atoms_per_shot",
                0.0,
                "must be at least 1",
            ));
        }
        let min_shots = if self.atoms_per_shot > 1 { 2 } else { 1 };
        if self.shots < min_shots {
            return Err(ThermoError::invalid(
                "shots",
                self.shots as f64,
                "too few shots for this protocol",
            ));
        }
        let chi = self.reference_phase;
        if !(chi.is_finite() && chi >= 0.0) {
            return Err(ThermoError::invalid(
                "reference_phase",
                chi,
                "must be finite and >= 0",
            ));
        }
        let lhs = chi + self.atoms_per_shot as f64 * self.bath.theta() * self.bath.m_atoms as f64;
        let rhs = PI - PHASE_WINDOW_MARGIN;
        // A theta computed from the window itself may overshoot by rounding.
        if lhs.is_nan() || lhs > rhs * (1.0 + 4.0 * f64::EPSILON) {
            return Err(ThermoError::PhaseWindow {
                lhs,
                rhs,
                detail: format!(
                    "chi + N*theta*M with chi = {chi}, N = {}, theta = {}, M = {}",
                    self.atoms_per_shot,
                    self.bath.theta(),
                    self.bath.m_atoms
                ),
            });
        }
        Ok(())
    }

    /// Probability of the designated port given `m` excited bath atoms.
    pub fn port_probability(&self, m: u64) -> f64 {
        let phi_b = self.bath.theta() * m as f64;
        single_port_probability(self.atoms_per_shot as f64 * phi_b + self.reference_phase)
    }

    /// Inverts an observed port fraction into `phi_B`, `m` and `beta`.
    pub fn estimate_from_fraction(&self, p_hat: f64) -> PhaseEstimate {
        let total = 2.0 * p_hat.clamp(0.0, 1.0).sqrt().acos();
        let phi_hat = (total - self.reference_phase) / self.atoms_per_shot as f64;
        let m_hat = phi_hat / self.bath.theta();
        let m_total = self.bath.m_atoms as f64;
        let beta_hat = (m_hat > 0.0 && m_hat < m_total)
            .then(|| (m_total / m_hat - 1.0).ln() / self.bath.epsilon);
        PhaseEstimate {
            phi_hat,
            m_hat,
            beta_hat,
        }
    }

    /// Estimate from `k` designated-port clicks, using the Jeffreys fraction.
    pub fn estimate_from_counts(&self, k: u64) -> PhaseEstimate {
        let p_hat = EstimatorMode::Jeffreys
            .fraction(k, self.shots)
            .expect("Jeffreys fraction is always defined");
        self.estimate_from_fraction(p_hat)
    }

    /// One trial: draw the bath occupation once, then `shots` detections.
    pub fn run_trial<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> (InterferometerOutcome, PhaseEstimate) {
        let m = bath_excitation_draw(&self.bath, self.mode, rng);
        let p = self.port_probability(m);
        let k = Binomial::new(self.shots, p)
            .expect("port probability lies in [0, 1]")
            .sample(rng);
        let outcome = InterferometerOutcome {
            m_realized: m,
            phi_b: self.bath.theta() * m as f64,
            counts_port_a: k,
            shots: self.shots,
        };
        (outcome, self.estimate_from_counts(k))
    }
}

/// `N` single-atom shots through the interferometer (shot-noise limited).
pub fn run_sn_protocol(
    bath: &BathSpec,
    n_shots: u64,
    mode: BathMode,
    stream: RngStream,
) -> Result<(InterferometerOutcome, PhaseEstimate)> {
    let config = ProtocolConfig::shot_noise(*bath, n_shots, mode);
    config.validate()?;
    Ok(config.run_trial(&mut stream.rng()))
}

/// `repetitions` shots of an `n_atoms` NOON state (Heisenberg limited).
pub fn run_noon_protocol(
    bath: &BathSpec,
    n_atoms: u64,
    repetitions: u64,
    mode: BathMode,
    stream: RngStream,
) -> Result<(InterferometerOutcome, PhaseEstimate)> {
    let config = ProtocolConfig::noon(*bath, n_atoms, repetitions, mode);
    config.validate()?;
    Ok(config.run_trial(&mut stream.rng()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferometerBatch {
    /// Temperature estimates; invalid outcomes are those with `m_hat`
    /// outside `(0, M)`.
    pub beta: TrialBatch,
    /// Phase estimates `phi_hat`, always defined.
    pub phase: TrialBatch,
}

/// Runs `trials` independent trials of `config`; trial `i` uses
/// `RngStream::new(master_seed, i)`.
pub fn run_interferometer_trials(
    config: &ProtocolConfig,
    trials: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<InterferometerBatch> {
    config.validate()?;
    if trials < 2 {
        return Err(ThermoError::invalid(
            "trials",
            trials as f64,
            "must be at least 2",
        ));
    }
    let estimates = exec.map_indexed(trials, |i| {
        config
            .run_trial(&mut RngStream::new(master_seed, i).rng())
            .1
    });
    Ok(InterferometerBatch {
        beta: TrialBatch::from_outcomes(estimates.iter().map(|e| e.beta_hat))?,
        phase: TrialBatch::from_outcomes(estimates.iter().map(|e| Some(e.phi_hat)))?,
    })
}

/// `1 / (theta sqrt(n_shots))`.
pub fn sigma_m_sn_theory(theta: f64, n_shots: u64) -> f64 {
    1.0 / (theta * (n_shots as f64).sqrt())
}

/// Shot-noise temperature precision `sigma_m / |d<m>/d beta|`.
pub fn sigma_beta_sn_theory(bath: &BathSpec, n_shots: u64) -> f64 {
    sigma_m_sn_theory(bath.theta(), n_shots) / bath.mean_excited_slope()
}

/// Heisenberg temperature precision of a single `n_atoms` NOON shot,
/// `1 / (N theta |d<m>/d beta|)`.
pub fn sigma_beta_h_theory(bath: &BathSpec, n_atoms: u64) -> f64 {
    1.0 / (n_atoms as f64 * bath.theta()) / bath.mean_excited_slope()
}

/// [`sigma_beta_h_theory`] averaged over `repetitions` independent shots.
pub fn sigma_beta_noon_theory(bath: &BathSpec, n_atoms: u64, repetitions: u64) -> f64 {
    sigma_beta_h_theory(bath, n_atoms) / (repetitions as f64).sqrt()
}

/// Phase precision `1 / (N sqrt(repetitions))` for NOON shots.
pub fn sigma_phi_noon_theory(n_atoms: u64, repetitions: u64) -> f64 {
    1.0 / (n_atoms as f64 * (repetitions as f64).sqrt())
}

/// `|1 - p + p e^{i phase}|^M`: magnitude of the characteristic function of
/// `Binomial(M, p)` at `phase`.
pub fn binomial_visibility(m_atoms: u64, p: f64, phase: f64) -> f64 {
    // |1 - p + p e^{ia}|^2 = 1 - 4 p (1 - p) sin^2(a / 2)
    let s = (0.5 * phase).sin();
    let shrink = 4.0 * p * (1.0 - p) * s * s;
    (0.5 * m_atoms as f64 * (-shrink).ln_1p()).exp()
}

/// Fringe visibility of an `n_atoms` NOON interferometer when the bath
/// occupation is redrawn on every shot.
pub fn dephasing_visibility(bath: &BathSpec, n_atoms: u64) -> f64 {
    binomial_visibility(
        bath.m_atoms,
        bath.excitation_probability(),
        n_atoms as f64 * bath.theta(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeEstimate {
    /// `2 P(port | chi = 0) - 1`, estimates `E[cos(N theta m)]`.
    pub in_phase: f64,
    /// `2 P(port | chi = pi/2) - 1`, estimates `-E[sin(N theta m)]`.
    pub quadrature: f64,
    pub visibility: f64,
    pub shots: u64,
}

/// Measures the NOON fringe contrast with the bath occupation redrawn on
/// every shot. Even shots run at reference phase 0, odd shots at `pi/2`, and
/// the two quadratures are combined into a visibility.
pub fn measure_fringe_visibility(
    bath: &BathSpec,
    n_atoms: u64,
    shots: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<FringeEstimate> {
    if shots < 2 {
        return Err(ThermoError::invalid(
            "shots",
            shots as f64,
            "must be at least 2",
        ));
    }
    if n_atoms == 0 {
        return Err(ThermoError::invalid("n_atoms", 0.0, "must be at least 1"));
    }
    let phase_per_m = n_atoms as f64 * bath.theta();
    let bath_dist = Binomial::new(bath.m_atoms, bath.excitation_probability())
        .expect("excitation probability lies in [0, 1/2]");
    let clicks = exec.map_indexed(shots, |i| {
        let mut rng = RngStream::new(master_seed, i).rng();
        let m = bath_dist.sample(&mut rng);
        let chi = if i % 2 == 0 { 0.0 } else { 0.5 * PI };
        let p = single_port_probability(phase_per_m * m as f64 + chi);
        Bernoulli::new(p)
            .expect("probability in [0, 1]")
            .sample(&mut rng)
    });
    let (mut even, mut even_clicks, mut odd, mut odd_clicks) = (0u64, 0u64, 0u64, 0u64);
    for (i, click) in clicks.into_iter().enumerate() {
        if i % 2 == 0 {
            even += 1;
            even_clicks += click as u64;
        } else {
            odd += 1;
            odd_clicks += click as u64;
        }
    }
    let in_phase = 2.0 * even_clicks as f64 / even as f64 - 1.0;
    let quadrature = 2.0 * odd_clicks as f64 / odd as f64 - 1.0;
    Ok(FringeEstimate {
        in_phase,
        quadrature,
        visibility: in_phase.hypot(quadrature),
        shots,
    })
}
