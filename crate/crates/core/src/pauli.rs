//! Pauli-term Hamiltonians.
//!
//! Basis convention: qubit `i` is bit `i` of the basis index, bit value 0 is
//! the `Z = +1` eigenstate, so the spin value of qubit `i` in basis state `b`
//! is `1 - 2 * bit_i(b)`.

use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    pub fn from_symbol(s: &str) -> Option<Axis> {
        match s {
            "X" | "x" => Some(Axis::X),
            "Y" | "y" => Some(Axis::Y),
            "Z" | "z" => Some(Axis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A weighted product of one or two single-qubit Pauli operators.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    coefficient: f64,
    factors: Vec<(Axis, usize)>,
}

impl PauliTerm {
    pub fn new(coefficient: f64, factors: Vec<(Axis, usize)>) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::NonFiniteCoefficient);
        }
        if factors.is_empty() || factors.len() > 2 {
            return Err(Error::invalid("a term has one or two Pauli factors"));
        }
        if factors.len() == 2 && factors[0].1 == factors[1].1 {
            return Err(Error::DuplicateQubit { qubit: factors[0].1 });
        }
        Ok(PauliTerm { coefficient, factors })
    }

    pub fn x(coefficient: f64, qubit: usize) -> Self {
        PauliTerm { coefficient, factors: alloc::vec![(Axis::X, qubit)] }
    }

    pub fn z(coefficient: f64, qubit: usize) -> Self {
        PauliTerm { coefficient, factors: alloc::vec![(Axis::Z, qubit)] }
    }

    /// Panics if `i == j`.
    pub fn zz(coefficient: f64, i: usize, j: usize) -> Self {
        assert_ne!(i, j, "ZZ term needs two distinct qubits");
        PauliTerm { coefficient, factors: alloc::vec![(Axis::Z, i), (Axis::Z, j)] }
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn factors(&self) -> &[(Axis, usize)] {
        &self.factors
    }

    pub fn is_diagonal(&self) -> bool {
        self.factors.iter().all(|&(a, _)| a == Axis::Z)
    }

    pub fn max_qubit(&self) -> usize {
        self.factors.iter().map(|&(_, q)| q).max().unwrap_or(0)
    }

    /// Value of a Z-only term on a computational basis state.
    fn diagonal_value(&self, basis: usize) -> f64 {
        let mut v = self.coefficient;
        for &(_, q) in &self.factors {
            if (basis >> q) & 1 == 1 {
                v = -v;
            }
        }
        v
    }
}

/// A Hamiltonian as a sum of Pauli terms plus a constant offset on `n_qubits`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    constant_offset: f64,
}

impl HamiltonianSpec {
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>, constant_offset: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::invalid("n_qubits must be positive"));
        }
        if n_qubits >= usize::BITS as usize {
            return Err(Error::invalid("too many qubits for the basis index"));
        }
        if !constant_offset.is_finite() {
            return Err(Error::NonFiniteCoefficient);
        }
        for t in &terms {
            let q = t.max_qubit();
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        Ok(HamiltonianSpec { n_qubits, terms, constant_offset })
    }

    /// The zero operator.
    pub fn empty(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, Vec::new(), 0.0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn constant_offset(&self) -> f64 {
        self.constant_offset
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.constant_offset = offset;
        self
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(PauliTerm::is_diagonal)
    }

    pub fn has_y(&self) -> bool {
        self.terms.iter().any(|t| t.factors.iter().any(|&(a, _)| a == Axis::Y))
    }

    /// Sum of absolute coefficients, an upper bound on the operator norm.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum::<f64>() + self.constant_offset.abs()
    }

    /// Classical energy of a basis state. Fails for non-diagonal specs.
    pub fn classical_energy(&self, basis: usize) -> Result<f64> {
        if !self.is_diagonal() {
            return Err(Error::NonDiagonal);
        }
        Ok(self.constant_offset + self.terms.iter().map(|t| t.diagonal_value(basis)).sum::<f64>())
    }
}

/// Transverse-field driver `-gamma * sum_i X_i`.
pub fn make_driver(n: usize, gamma: f64) -> Result<HamiltonianSpec> {
    if n == 0 {
        return Err(Error::invalid("driver needs at least one qubit"));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::invalid("driver strength must be positive"));
    }
    let terms = (0..n).map(|i| PauliTerm::x(-gamma, i)).collect();
    HamiltonianSpec::new(n, terms, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn driver_terms() {
        let h = make_driver(2, 1.0).unwrap();
        assert_eq!(h.terms(), &[PauliTerm::x(-1.0, 0), PauliTerm::x(-1.0, 1)]);
        assert!(make_driver(0, 1.0).is_err());
        assert!(make_driver(3, 0.0).is_err());
        assert!(make_driver(3, -1.0).is_err());
    }

    #[test]
    fn rejects_bad_terms() {
        assert_eq!(
            PauliTerm::new(1.0, alloc::vec![(Axis::Z, 0), (Axis::Z, 0)]),
            Err(Error::DuplicateQubit { qubit: 0 })
        );
        assert_eq!(PauliTerm::new(f64::NAN, alloc::vec![(Axis::Z, 0)]), Err(Error::NonFiniteCoefficient));
        assert_eq!(
            HamiltonianSpec::new(2, alloc::vec![PauliTerm::z(1.0, 2)], 0.0),
            Err(Error::QubitOutOfRange { qubit: 2, n_qubits: 2 })
        );
    }

    #[test]
    fn classical_energy_sign_convention() {
        let h = HamiltonianSpec::new(2, alloc::vec![PauliTerm::z(1.0, 0), PauliTerm::zz(0.5, 0, 1)], 0.25)
            .unwrap();
        assert_eq!(h.classical_energy(0b00).unwrap(), 1.75);
        assert_eq!(h.classical_energy(0b01).unwrap(), -1.25);
        assert_eq!(h.classical_energy(0b10).unwrap(), 0.75);
        assert!(make_driver(1, 1.0).unwrap().classical_energy(0).is_err());
    }
}
