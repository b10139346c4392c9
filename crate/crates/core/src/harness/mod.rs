//! Experiment runner support: trial statistics, instance files, repeated
//! seeded trials and result output.

pub mod experiment;
pub mod instance_io;
pub mod output;
pub mod stats;

pub use experiment::{
    run_experiment, run_trials, run_tsp_experiment, standard_iterations, trial_seed,
    ExperimentReport, ExperimentSpec, TrialRecord, TspExperimentSpec, TspReport, TspTrialRecord,
    STANDARD_PROTOCOL, STANDARD_TRIALS,
};
pub use instance_io::{format_instance, parse_instance, parse_instance_str, write_instance};
pub use output::{emit_results, to_csv, to_json, write_traces, OutputFormat, Report, CSV_HEADER};
pub use stats::{compute_stats, TrialStats};
