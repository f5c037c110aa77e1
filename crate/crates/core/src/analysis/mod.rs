//! Campaign orchestration: parameter sweeps, power-law fits, bath-limited
//! precision and result files.

mod bath;
mod fit;
mod output;
mod sweep;

pub use bath::{bath_intrinsic_sigma, fig1_curves, matched_thermometer_size, Fig1Row, Regime};
pub use fit::{fit_power_law, ScalingFit};
pub use output::{
    emit_results, load_jsonl, read_jsonl, write_csv, write_fig1_csv, write_jsonl, OutputFormat,
    Record, FIG1_CSV_HEADER, SWEEP_CSV_HEADER,
};
pub use sweep::{run_sweep, Protocol, SweepPlan, SweepPoint, SweepReport};
