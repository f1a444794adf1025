//! Experiment harness around `parimutuel-core`: scenario files, sweeps over
//! the house take, take optimisation and the finite-population cross-check,
//! all writing CSV.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
mod error;
pub mod scenario;
pub mod table;

pub use commands::{
    run_optimize_take, run_oracle, run_solve, run_sweep, OracleReport, TakeReport, BASELINE_W,
};
pub use error::CliError;
pub use scenario::{KappaSpec, Metric, Scenario};
