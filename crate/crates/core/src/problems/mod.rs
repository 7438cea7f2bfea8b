//! Reference problem generators and classical oracles.

mod ising;
mod mqo;

pub use ising::{gen_fim, gen_hw, gen_sk, SkDistribution, SkParams};
pub use mqo::{
    decode_selection, gen_mqo, mqo_brute_force, mqo_cost, mqo_example, mqo_to_qubo, MqoInstance, PlanSelection,
};

use alloc::string::String;
use alloc::vec::Vec;

use crate::pauli::{Axis, HamiltonianSpec};
use crate::{Error, Result};

pub const MAX_CLASSICAL_QUBITS: usize = 24;

/// `(coefficient, Z mask)` pairs of a diagonal spec.
fn z_masks(spec: &HamiltonianSpec) -> Result<Vec<(f64, usize)>> {
    if !spec.is_diagonal() {
        return Err(Error::NonDiagonal);
    }
    Ok(spec
        .terms()
        .iter()
        .map(|t| {
            let mask = t.factors().iter().fold(0usize, |m, &(a, q)| {
                debug_assert_eq!(a, Axis::Z);
                m | 1 << q
            });
            (t.coefficient(), mask)
        })
        .collect())
}

/// All `2^N` classical energies of a diagonal spec, indexed by basis state.
pub fn classical_energies(spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    if spec.n_qubits() > MAX_CLASSICAL_QUBITS {
        return Err(Error::invalid("classical enumeration limited to 24 qubits"));
    }
    let masks = z_masks(spec)?;
    Ok((0..spec.dim())
        .map(|b| {
            spec.constant_offset()
                + masks
                    .iter()
                    .map(|&(c, m)| if (b & m).count_ones() % 2 == 0 { c } else { -c })
                    .sum::<f64>()
        })
        .collect())
}

/// Exhaustive classical minimum `(basis index, energy)`.
///
/// Ties go to the lexicographically smallest bitstring, read qubit 0 first.
pub fn classical_ground_state(spec: &HamiltonianSpec) -> Result<(usize, f64)> {
    let n = spec.n_qubits();
    let energies = classical_energies(spec)?;
    let key = |b: usize| b.reverse_bits() >> (usize::BITS as usize - n);
    let mut best = 0usize;
    for (b, &e) in energies.iter().enumerate().skip(1) {
        let eb = energies[best];
        if e < eb || (e == eb && key(b) < key(best)) {
            best = b;
        }
    }
    Ok((best, energies[best]))
}

/// Basis index as a `0`/`1` string, qubit 0 first.
pub fn bitstring(basis: usize, n: usize) -> String {
    (0..n).map(|i| if basis >> i & 1 == 1 { '1' } else { '0' }).collect()
}
