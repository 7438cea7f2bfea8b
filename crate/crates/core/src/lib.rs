//! Spectral analysis of quantum annealing Hamiltonians.
//!
//! The crate models the interpolating Hamiltonian `H(s) = A(s) H_I + B(s) H_P`
//! over Pauli-term operators, applies it matrix-free to state vectors, and
//! extracts the lowest eigenpairs across a grid of `s` values. On top of the
//! sweep it provides overlap-based branch tracking, spin observables, the
//! reference problem generators (ferromagnet, SK spin glass, Hamming weight,
//! multi-query optimisation) and the derived diagnostics (gaps, minimum gap,
//! transition matrix elements, adiabatic ratio, ensemble summaries).
//!
//! Only `alloc` is required; IO, file formats and threading live in the
//! companion `anneal` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod derive;
pub mod eigen;
mod error;
pub mod format;
pub mod linalg;
pub mod observables;
pub mod operator;
pub mod pauli;
pub mod problems;
pub mod qubo;
pub mod rng;
mod scalar;
pub mod schedule;
pub mod state;
pub mod sweep;
pub mod tracking;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use scalar::Scalar;

pub use eigen::{lowest_eigenpairs, EigenOptions, EigenResult};
pub use format::{parse_hamiltonian, serialize_hamiltonian};
pub use operator::{apply_hamiltonian, AnnealOperator, Executor, LinearOperator, Serial};
pub use pauli::{make_driver, Axis, HamiltonianSpec, PauliTerm};
pub use qubo::{qubo_to_ising, QuboSpec};
pub use schedule::{Schedule, ScheduleValue};
pub use state::StateVector;
pub use sweep::{sweep, SpectralSnapshot, SpectralSweep, SweepConfig};
pub use tracking::{track_branches, TrackedBranches};
