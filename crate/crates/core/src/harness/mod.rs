//! Benchmark sweeps, trace files and rate analysis.

mod analysis;
mod config;
mod experiment;
mod oracle;
mod trace;
mod verify;

pub use analysis::{
    confidence_interval, exploitability_matched_correspondence, fit_loglog, fit_loglog_slope,
    iterations_to_reach, mean_by_iteration, median, runs_of, weight_correspondence, SlopeFit,
    FIT_FLOOR, MIN_FIT_POINTS,
};
pub use config::ExperimentConfig;
pub use experiment::{run_experiment, run_sweep, thread_limit, THREADS_ENV};
pub use oracle::{dwfp_average_at_weights, max_gap, small_step_fp_oracle, OraclePoint};
pub use trace::{read_trace, read_trace_file, write_trace, write_trace_file};
pub use verify::{verify_suite, CheckResult};
