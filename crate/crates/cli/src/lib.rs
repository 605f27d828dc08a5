//! Command-line front end for the `nogo-core` experiments: config parsing,
//! the named commands, and report rendering.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run_command, CommandError, CommandName};
pub use config::{parse_experiment_config, ConfigError, ExperimentConfig};
pub use report::{Format, Report};
