//! Library surface of the experiment harness; the `demeda` binary is a thin
//! clap wrapper around these modules.

pub mod config;
pub mod experiment;
