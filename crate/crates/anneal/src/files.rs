//! Reading term files and schedule tables from disk.

use std::fs;
use std::path::Path;

use anneal_core::{parse_hamiltonian, HamiltonianSpec, Schedule};

use crate::error::IoContext;
use crate::{Error, Result};

pub fn read_hamiltonian(path: &Path, n_qubits: usize) -> Result<HamiltonianSpec> {
    let text = fs::read_to_string(path).at(path)?;
    parse_hamiltonian(&text, n_qubits).map_err(|e| Error::Parse { path: path.into(), message: e.to_string() })
}

/// Schedule table: one `s A B` sample per line, `#` comments allowed.
pub fn parse_schedule(text: &str) -> anneal_core::Result<Schedule> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|e| anneal_core::Error::Parse { line: i + 1, message: format!("{e}") })?;
        let [s, a, b] = vals[..] else {
            return Err(anneal_core::Error::Parse { line: i + 1, message: "expected `s A B`".into() });
        };
        rows.push((s, a, b));
    }
    Schedule::tabulated(rows)
}

pub fn read_schedule(path: &Path) -> Result<Schedule> {
    let text = fs::read_to_string(path).at(path)?;
    parse_schedule(&text).map_err(|e| Error::Parse { path: path.into(), message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_table() {
        let s = parse_schedule("# s A B\n0 1 0\n0.5 0.5 0.2\n1 0 1\n").unwrap();
        let v = s.eval(0.25).unwrap();
        assert!((v.a - 0.75).abs() < 1e-15 && (v.b - 0.1).abs() < 1e-15);
        assert!(parse_schedule("0 1\n").is_err());
        assert!(parse_schedule("0 1 0\n0.5 x 1\n").is_err());
    }
}
