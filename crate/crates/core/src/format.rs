//! Line-oriented term file format.
//!
//! One term per line, `coeff axis index [axis index]`, whitespace separated,
//! axis one of `X`, `Y`, `Z`. Blank lines and lines starting with `#` are
//! skipped. A line holding only a coefficient adds to the constant offset.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::pauli::{Axis, HamiltonianSpec, PauliTerm};
use crate::{Error, Result};

pub fn parse_hamiltonian(text: &str, n_qubits: usize) -> Result<HamiltonianSpec> {
    let mut terms = Vec::new();
    let mut offset = 0.0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at_line = |e: Error| Error::AtLine { line: line_no, source: Box::new(e) };
        let malformed = |msg: &str| Error::Parse { line: line_no, message: String::from(msg) };

        let fields: Vec<&str> = line.split_whitespace().collect();
        let coeff: f64 = fields[0].parse().map_err(|_| malformed("coefficient is not a number"))?;
        if !coeff.is_finite() {
            return Err(at_line(Error::NonFiniteCoefficient));
        }
        if fields.len() == 1 {
            offset += coeff;
            continue;
        }
        if fields.len() != 3 && fields.len() != 5 {
            return Err(malformed("expected `coeff axis index [axis index]`"));
        }
        let mut factors = Vec::with_capacity(2);
        for pair in fields[1..].chunks(2) {
            let axis = Axis::from_symbol(pair[0]).ok_or_else(|| malformed("axis must be X, Y or Z"))?;
            let qubit: usize = pair[1].parse().map_err(|_| malformed("qubit index is not a non-negative integer"))?;
            if qubit >= n_qubits {
                return Err(at_line(Error::QubitOutOfRange { qubit, n_qubits }));
            }
            factors.push((axis, qubit));
        }
        terms.push(PauliTerm::new(coeff, factors).map_err(at_line)?);
    }
    HamiltonianSpec::new(n_qubits, terms, offset)
}

/// Writes one line per term with shortest round-trip coefficients, so that
/// parsing the output reproduces the spec exactly. A non-zero constant offset
/// goes on a final coefficient-only line.
pub fn serialize_hamiltonian(spec: &HamiltonianSpec) -> String {
    let mut out = String::new();
    for t in spec.terms() {
        let _ = write!(out, "{}", t.coefficient());
        for &(axis, q) in t.factors() {
            let _ = write!(out, " {} {}", axis, q);
        }
        out.push('\n');
    }
    if spec.constant_offset() != 0.0 {
        let _ = writeln!(out, "{}", spec.constant_offset());
    }
    out
}
