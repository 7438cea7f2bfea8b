//! Command-line tooling around `anneal-core`: run directories and CSV
//! export, problem files, ensembles, a rayon executor and a dense-matrix
//! reference implementation for small systems.

pub mod cli;
pub mod dense;
pub mod ensemble;
mod error;
pub mod exec;
pub mod files;
pub mod generate;
pub mod post;
pub mod simulate;
pub mod store;

pub use anneal_core;
pub use error::{Error, Result};
pub use exec::Parallel;
pub use simulate::simulate;
pub use store::{read_run, write_run, RunRecord};
