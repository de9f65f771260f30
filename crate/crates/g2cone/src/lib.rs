//! Command-line companion of `g2cone-core`: run configuration, the
//! verification and trajectory commands, and their CSV, JSON and SVG
//! artifacts.
//!
//! Every artifact is a pure function of the configuration and seed. Floats
//! are written with 17 significant digits, so reruns are byte-identical.

pub mod commands;
pub mod config;
pub mod csv;
pub mod numfmt;
pub mod svg;

pub use commands::{execute, Command, Status};
pub use config::{ConfigError, Formats, MuRange, RunConfig};
