//! Table and figure reproduction behind the command-line front end.

pub mod bifurcation;
pub mod commands;
pub mod config;
pub mod svg;
pub mod warmup;

pub use commands::{run, Assertion, Command, Report};
pub use config::{parse_map_spec, ExperimentConfig, Format};
