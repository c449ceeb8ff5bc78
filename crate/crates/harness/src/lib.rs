//! Monte Carlo harness, result export and the `hentropy` command-line tool
//! for the `harmonic-entropy-core` estimators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod input;
pub mod simulation;

pub use config::SimulationConfig;
pub use error::{HarnessError, Result};
pub use simulation::{
    normality_check, rate_slope, run_simulation, run_simulation_with_workers, CellResult,
    NormalityReport, SimulationResult,
};
