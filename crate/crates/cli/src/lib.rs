//! Library side of the `abrw` command: argument types, run settings and
//! manifests, and the subcommand implementations.

pub mod args;
pub mod commands;
pub mod output;
pub mod settings;

pub use settings::{ConfigFile, RunManifest, Settings};
