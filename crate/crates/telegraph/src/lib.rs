//! Experiment runner on top of `telegraph-core`.
//!
//! Loads a JSON or TOML experiment description, samples switching-rate
//! ensembles, and writes correlation curves, α sweeps, spectra and
//! verification reports as CSV and JSON.

pub mod config;
mod error;
pub mod experiment;
pub mod formats;
pub mod revival;
pub mod runner;
pub mod spectrum;
pub mod verify;

pub use config::{BathMode, ExperimentConfig};
pub use error::{Error, Result};
pub use experiment::{run_alpha_sweep, run_ensemble};
pub use runner::Runtime;
pub use spectrum::run_spectrum;
pub use verify::{verify, Report};
