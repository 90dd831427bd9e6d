//! Library side of the `cosmoqsim` binary: settings resolution, the
//! expansion-rate sweep and the report generators.

pub mod commands;
pub mod config;
pub mod sweep;

pub use config::{ConfigError, Settings};
pub use sweep::{SweepRow, HEADER};
