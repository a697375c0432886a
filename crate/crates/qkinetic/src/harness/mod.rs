//! Experiment harness: configuration, scenario drivers, and output writers.

pub mod config;
pub mod scenarios;

pub use config::{
    parse_config, resolve, scheme_from_name, CliOverrides, ExperimentConfig, Overlay, Scenario,
};
pub use scenarios::{
    run_accuracy_table, run_relaxation, run_shock_tube, AccuracyResult, AccuracyRow, ProfileRow,
    RelaxationResult, SeriesSample, ShockResult,
};
