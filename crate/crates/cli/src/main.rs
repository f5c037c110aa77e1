mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thermometry::analysis::{
    emit_results, fig1_curves, run_sweep, write_fig1_csv, OutputFormat, Protocol, SweepPlan,
};
use thermometry::estimators::EstimatorMode;
use thermometry::interferometry::{dephasing_visibility, BathMode, BathSpec};
use thermometry::oracle::{mixed_bath_visibility_exact, verify_all, MAX_ENUMERATED_ATOMS};
use thermometry::stats::{shot_noise_sigma_beta, thermal_summary};
use thermometry::{Execution, InverseTemperature, ThermoError, TwoLevelSpec};

const EXIT_INVALID: u8 = 2;
const EXIT_ALL_INVALID: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "thermometry",
    version,
    about = "Shot-noise versus Heisenberg-limited thermometry"
)]
struct Cli {
    /// Plain `key = value` file supplying defaults for any flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Thermalizing,
    Sn,
    Noon,
}

#[derive(Clone, Copy, ValueEnum)]
enum BathModeArg {
    Fixed,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Raw,
    Jeffreys,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form thermal statistics of N two-level atoms
    Stats {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Energy per atom and scaled precision versus beta*epsilon, as CSV
    Fig1 {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        beta_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo precision sweep over N with a log-log scaling fit
    Sweep {
        #[arg(long, value_enum)]
        protocol: ProtocolArg,
        #[arg(long, value_delimiter = ',', required = true)]
        n_values: Vec<u64>,
        #[arg(long)]
        trials: u64,
        /// NOON repetitions per trial
        #[arg(long, default_value_t = 200)]
        reps: u64,
        #[arg(long)]
        bath_m: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        beta_true: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "fixed")]
        bath_mode: BathModeArg,
        #[arg(long, value_enum, default_value = "jeffreys")]
        estimator: EstimatorArg,
        /// Fixed phase offset on the bath arm (radians)
        #[arg(long, default_value_t = 0.0)]
        reference_phase: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        /// Run trials on one thread
        #[arg(long)]
        sequential: bool,
    },
    /// Run the exact-oracle equivalence suite
    Verify,
    /// Fringe visibility of a NOON interferometer with a fluctuating bath
    Dephasing {
        #[arg(long)]
        bath_m: u64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        beta_true: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
    },
}

fn exit_code(err: &ThermoError) -> u8 {
    match err {
        ThermoError::AllInvalid { .. } | ThermoError::EmptyBatch { .. } => EXIT_ALL_INVALID,
        ThermoError::Io { .. } => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

fn missing(flag: &'static str, protocol: &str) -> ThermoError {
    ThermoError::InvalidPlan(format!("--{flag} is required for protocol {protocol}"))
}

fn run(command: Command) -> Result<ExitCode, ThermoError> {
    match command {
        Command::Stats { epsilon, beta, n } => {
            let spec = TwoLevelSpec::new(n, epsilon)?;
            let beta = InverseTemperature::new(beta)?;
            let s = thermal_summary(&spec, beta);
            println!("n={n}");
            println!("epsilon={epsilon}");
            println!("beta={}", beta.value());
            println!("log_z={}", s.log_z);
            println!("mean_energy={}", s.mean_energy);
            println!("energy_variance={}", s.energy_variance);
            println!("eps_bar={}", s.eps_bar);
            println!("eps_prime={}", s.eps_prime);
            println!("fisher_info={}", s.fisher_info);
            println!(
                "shot_noise_sigma_beta={}",
                shot_noise_sigma_beta(&spec, beta)
            );
        }
        Command::Fig1 {
            epsilon,
            beta_max,
            points,
            out,
        } => {
            if points < 2 {
                return Err(ThermoError::InvalidPlan(
                    "--points must be at least 2".into(),
                ));
            }
            let grid: Vec<f64> = (0..points)
                .map(|i| beta_max * i as f64 / (points - 1) as f64)
                .collect();
            let rows = fig1_curves(epsilon, &grid)?;
            let io = |source| ThermoError::Io {
                path: out.clone(),
                source,
            };
            let file = std::fs::File::create(&out).map_err(io)?;
            write_fig1_csv(&rows, std::io::BufWriter::new(file)).map_err(io)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Sweep {
            protocol,
            n_values,
            trials,
            reps,
            bath_m,
            alpha,
            tau,
            beta_true,
            epsilon,
            bath_mode,
            estimator,
            reference_phase,
            seed,
            out,
            format,
            sequential,
        } => {
            let beta_true = InverseTemperature::new(beta_true)?;
            let bath_mode = match bath_mode {
                BathModeArg::Fixed => BathMode::FixedM,
                BathModeArg::Sampled => BathMode::SampledM,
            };
            let bath = |name: &str| -> Result<BathSpec, ThermoError> {
                BathSpec::new(
                    bath_m.ok_or_else(|| missing("bath-m", name))?,
                    epsilon,
                    beta_true,
                    alpha.ok_or_else(|| missing("alpha", name))?,
                    tau.ok_or_else(|| missing("tau", name))?,
                )
            };
            let protocol = match protocol {
                ProtocolArg::Thermalizing => Protocol::Thermalizing {
                    epsilon,
                    beta_true,
                    estimator: match estimator {
                        EstimatorArg::Raw => EstimatorMode::Raw,
                        EstimatorArg::Jeffreys => EstimatorMode::Jeffreys,
                    },
                },
                ProtocolArg::Sn => Protocol::ShotNoise {
                    bath: bath("sn")?,
                    bath_mode,
                    reference_phase,
                },
                ProtocolArg::Noon => Protocol::Noon {
                    bath: bath("noon")?,
                    bath_mode,
                    repetitions: reps,
                    reference_phase,
                },
            };
            let plan = SweepPlan {
                protocol,
                n_values,
                trials_per_n: trials,
                master_seed: seed,
            };
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            let report = run_sweep(&plan, exec)?;
            let format = match format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Jsonl => OutputFormat::Jsonl,
            };
            emit_results(&report, format, &out)?;
            if let Some(fit) = &report.fit {
                println!(
                    "{}: slope = {:.4} +/- {:.4}, r2 = {:.5} over {} points -> {}",
                    plan.protocol.name(),
                    fit.slope,
                    fit.stderr_slope,
                    fit.r_squared,
                    fit.points.len(),
                    out.display()
                );
            }
        }
        Command::Verify => {
            let checks = verify_all();
            let mut ok = true;
            for c in &checks {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{status} {} ({} cases, max error {:.3e}, tolerance {:.1e})",
                    c.name, c.cases, c.max_error, c.tolerance
                );
                ok &= c.passed();
            }
            return Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            });
        }
        Command::Dephasing {
            bath_m,
            theta,
            n,
            beta_true,
            epsilon,
        } => {
            let bath =
                BathSpec::with_theta(bath_m, epsilon, InverseTemperature::new(beta_true)?, theta)?;
            println!("p={}", bath.excitation_probability());
            println!("visibility_closed_form={}", dephasing_visibility(&bath, n));
            if bath_m as usize <= MAX_ENUMERATED_ATOMS {
                let exact = mixed_bath_visibility_exact(
                    bath_m as usize,
                    bath.excitation_probability(),
                    n as f64 * theta,
                )?;
                println!("visibility_oracle={exact}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = match config::merge(std::env::args().collect()) {
        Ok(args) => args,
        Err(config::ConfigError::Io(e)) => {
            eprintln!("error: cannot read config file: {e}");
            return ExitCode::from(EXIT_IO);
        }
        Err(e) => {
            eprintln!("error: config file {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
