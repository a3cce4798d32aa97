//! Experiment driver for the `mimocsi-core` simulator: profile and
//! configuration files, model persistence, seeded parallel sweeps, the
//! adaptive-ratio experiment and CSV output.

pub mod adaptive_exp;
pub mod config;
pub mod error;
pub mod experiment;
pub mod heatmap;
pub mod model_io;
pub mod policy_csv;
pub mod profile;
pub mod sweep;
pub mod timing;

pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use experiment::Experiment;
pub use mimocsi_core as core;
