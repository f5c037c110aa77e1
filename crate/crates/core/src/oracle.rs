//! Brute-force references for the closed forms.
//!
//! Every Hamiltonian involved is diagonal in the configuration basis (one bit
//! per atom, set when the atom is excited), so thermal traces are literal sums
//! over configurations and time evolution is a per-configuration phase. No
//! closed-form result is used on this side. Sizes are guarded and the guards
//! fail loudly instead of approximating.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, ThermoError};
use crate::interferometry::{binomial_visibility, noon_outcome_probability};
use crate::stats::{thermal_summary, InverseTemperature, TwoLevelSpec};

pub const MAX_ENUMERATED_ATOMS: usize = 16;
pub const MAX_COMBINED_ATOMS: usize = 24;
pub const MAX_NOON_ATOMS: usize = 8;

fn guard(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(ThermoError::SizeGuard { what, value, limit })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumeratedThermal {
    pub z: f64,
    pub mean_energy: f64,
    pub energy_variance: f64,
}

/// Partition function, mean energy and energy variance of `n_atoms`
/// independent two-level atoms, summed over all `2^N` configurations.
pub fn enumerate_thermal(n_atoms: usize, epsilon: f64, beta: f64) -> Result<EnumeratedThermal> {
    guard("n_atoms", n_atoms, MAX_ENUMERATED_ATOMS)?;
    let configs = 1u32 << n_atoms;
    let energies: Vec<f64> = (0..configs)
        .map(|c| c.count_ones() as f64 * epsilon)
        .collect();
    let weights: Vec<f64> = energies.iter().map(|e| (-beta * e).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mean_energy = energies
        .iter()
        .zip(&weights)
        .map(|(e, w)| e * w)
        .sum::<f64>()
        / z;
    let energy_variance = energies
        .iter()
        .zip(&weights)
        .map(|(e, w)| w * (e - mean_energy) * (e - mean_energy))
        .sum::<f64>()
        / z;
    Ok(EnumeratedThermal {
        z,
        mean_energy,
        energy_variance,
    })
}

/// Thermometer-plus-bath configuration space with the density-density
/// interaction `alpha * sum_{j,k} |e><e|_j (x) |e><e|_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfigurationBasis {
    n_thermometer: usize,
    m_bath: usize,
}

impl ConfigurationBasis {
    pub fn new(n_thermometer: usize, m_bath: usize) -> Result<Self> {
        guard("n_thermometer", n_thermometer, MAX_ENUMERATED_ATOMS)?;
        guard("m_bath", m_bath, MAX_ENUMERATED_ATOMS)?;
        guard(
            "n_thermometer + m_bath",
            n_thermometer + m_bath,
            MAX_COMBINED_ATOMS,
        )?;
        Ok(Self {
            n_thermometer,
            m_bath,
        })
    }

    pub fn dimension(&self) -> u64 {
        1u64 << (self.n_thermometer + self.m_bath)
    }

    /// Interaction energy of a configuration in units of `alpha`. The low
    /// `n_thermometer` bits label the thermometer atoms, the rest the bath.
    pub fn interaction_energy(&self, config: u64) -> u64 {
        let mut energy = 0;
        for j in 0..self.n_thermometer {
            for k in 0..self.m_bath {
                let thermo_excited = (config >> j) & 1;
                let bath_excited = (config >> (self.n_thermometer + k)) & 1;
                energy += thermo_excited * bath_excited;
            }
        }
        energy
    }
}

/// Interaction phase accumulated in time `tau` (with `theta = alpha tau`) by
/// the configuration in which all `n_thermometer` atoms and `m_excited_bath`
/// bath atoms are excited.
pub fn branch_phase(n_thermometer: usize, m_excited_bath: usize, theta: f64) -> Result<f64> {
    let basis = ConfigurationBasis::new(n_thermometer, m_excited_bath)?;
    let all_excited = basis.dimension() - 1;
    Ok(basis.interaction_energy(all_excited) as f64 * theta)
}

fn splitter() -> [[Complex64; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex64::new(s, 0.0);
    let i = Complex64::new(0.0, s);
    [[one, i], [i, one]]
}

fn apply(u: &[[Complex64; 2]; 2], v: [Complex64; 2]) -> [Complex64; 2] {
    [
        u[0][0] * v[0] + u[0][1] * v[1],
        u[1][0] * v[0] + u[1][1] * v[1],
    ]
}

/// Probabilities of the two `A_N` outcomes (all atoms at port 3, all at
/// port 4) for an `n_atoms` NOON interferometer with per-atom bath phase
/// `phi_b` and an extra reference phase `chi` on the bath arm.
///
/// The state is carried as the amplitude pair on `{|N,0>, |0,N>}`. The
/// opening map sends `|N,0>` to `(|N,0> + i|0,N>)/sqrt(2)`; each of the `N`
/// atoms in the bath arm multiplies that branch by `e^{i phi_b}`; the closing
/// splitter is the same 2x2 matrix as the opening one.
pub fn noon_probs_exact_with_reference(n_atoms: usize, phi_b: f64, chi: f64) -> Result<(f64, f64)> {
    guard("n_atoms", n_atoms, MAX_NOON_ATOMS)?;
    let u = splitter();
    let mut state = apply(&u, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    for _ in 0..n_atoms {
        state[1] *= Complex64::from_polar(1.0, phi_b);
    }
    state[1] *= Complex64::from_polar(1.0, chi);
    let out = apply(&u, state);
    Ok((out[0].norm_sqr(), out[1].norm_sqr()))
}

pub fn noon_probs_exact(n_atoms: usize, phi_b: f64) -> Result<(f64, f64)> {
    noon_probs_exact_with_reference(n_atoms, phi_b, 0.0)
}

/// Pairwise summation; keeps the rounding error of long phasor sums at
/// `O(log n)` ulps.
fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// `|E[e^{i phase m}]|` for `m ~ Binomial(M, p)`, summed directly over all
/// `2^M` bath configurations.
pub fn mixed_bath_visibility_exact(m_atoms: usize, p: f64, phase: f64) -> Result<f64> {
    guard("m_atoms", m_atoms, MAX_ENUMERATED_ATOMS)?;
    let terms: Vec<Complex64> = (0..1u32 << m_atoms)
        .map(|c| {
            let k = c.count_ones() as i32;
            let weight = p.powi(k) * (1.0 - p).powi(m_atoms as i32 - k);
            Complex64::from_polar(weight, phase * k as f64)
        })
        .collect();
    Ok(pairwise_sum(&terms).norm())
}

/// Outcome of one named oracle check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Runs the full oracle equivalence suite: thermal enumeration, NOON
/// interferometer algebra, interaction phases and bath dephasing.
pub fn verify_all() -> Vec<CheckResult> {
    let mut checks = Vec::new();

    let mut max_err = 0.0f64;
    let mut cases = 0;
    for n in 1..=12usize {
        for x in [0.1, 1.0, 5.0] {
            for eps in [0.5, 1.0, 2.0] {
                let beta = x / eps;
                let exact = enumerate_thermal(n, eps, beta).expect("within guard");
                let spec = TwoLevelSpec::new(n as u64, eps).expect("valid spec");
                let s = thermal_summary(&spec, InverseTemperature::new(beta).expect("beta >= 0"));
                max_err = max_err
                    .max(rel_err(exact.z.ln(), s.log_z))
                    .max(rel_err(exact.mean_energy, s.mean_energy))
                    .max(rel_err(exact.energy_variance, s.energy_variance));
                cases += 1;
            }
        }
    }
    checks.push(CheckResult {
        name: "thermal enumeration vs closed form",
        cases,
        max_error: max_err,
        tolerance: 1e-12,
    });

    let mut max_err = 0.0f64;
    let mut cases = 0;
    for n in 1..=MAX_NOON_ATOMS {
        for j in 0..20 {
            let phi = -PI + 2.0 * PI * j as f64 / 19.0;
            let (p3, p4) = noon_probs_exact(n, phi).expect("within guard");
            let half = 0.5 * n as f64 * phi;
            max_err = max_err
                .max((p3 - half.sin().powi(2)).abs())
                .max((p4 - half.cos().powi(2)).abs())
                .max((p4 - noon_outcome_probability(n as u64, phi)).abs())
                .max((p3 + p4 - 1.0).abs());
            cases += 1;
        }
    }
    checks.push(CheckResult {
        name: "NOON amplitudes vs cos^2 law",
        cases,
        max_error: max_err,
        tolerance: 1e-10,
    });

    let mut max_err = 0.0f64;
    let mut cases = 0;
    for n in 0..=8usize {
        for m in 0..=8usize {
            for theta in [0.1, 0.7, 2.9] {
                let phase = branch_phase(n, m, theta).expect("within guard");
                max_err = max_err.max((phase - (n * m) as f64 * theta).abs());
                cases += 1;
            }
        }
    }
    checks.push(CheckResult {
        name: "interaction branch phase = n m theta",
        cases,
        max_error: max_err,
        tolerance: 0.0,
    });

    let mut max_err = 0.0f64;
    let mut cases = 0;
    for m in 1..=MAX_ENUMERATED_ATOMS {
        for p in [0.0, 0.1, 0.25, 0.5] {
            for j in 0..8 {
                let phase = 0.4 * j as f64;
                let exact = mixed_bath_visibility_exact(m, p, phase).expect("within guard");
                max_err = max_err.max((exact - binomial_visibility(m as u64, p, phase)).abs());
                cases += 1;
            }
        }
    }
    checks.push(CheckResult {
        name: "dephasing closed form vs configuration sum",
        cases,
        max_error: max_err,
        tolerance: 1e-14,
    });

    checks
}
