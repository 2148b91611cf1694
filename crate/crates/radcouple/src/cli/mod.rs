//! Experiment harness: config-driven subcommands with CSV outputs.
pub mod config;
