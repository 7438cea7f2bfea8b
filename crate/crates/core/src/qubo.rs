//! QUBO cost functions and their Ising form.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::pauli::{HamiltonianSpec, PauliTerm};
use crate::{Error, Result};

/// `C(x) = offset + sum_i a_i x_i + sum_{i<j} b_ij x_i x_j` over `x in {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuboSpec {
    n_vars: usize,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl QuboSpec {
    pub fn new(n_vars: usize) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::invalid("a QUBO needs at least one variable"));
        }
        Ok(QuboSpec { n_vars, ..Default::default() })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.n_vars {
            return Err(Error::QubitOutOfRange { qubit: i, n_qubits: self.n_vars });
        }
        Ok(())
    }

    pub fn add_linear(&mut self, i: usize, a: f64) -> Result<()> {
        self.check(i)?;
        if !a.is_finite() {
            return Err(Error::NonFiniteCoefficient);
        }
        *self.linear.entry(i).or_insert(0.0) += a;
        Ok(())
    }

    /// Adds `b x_i x_j`; the pair is stored unordered and `i == j` folds into
    /// the linear part since `x_i^2 = x_i`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, b: f64) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        if !b.is_finite() {
            return Err(Error::NonFiniteCoefficient);
        }
        if i == j {
            return self.add_linear(i, b);
        }
        let key = if i < j { (i, j) } else { (j, i) };
        *self.quadratic.entry(key).or_insert(0.0) += b;
        Ok(())
    }

    pub fn add_offset(&mut self, c: f64) {
        self.offset += c;
    }

    /// Cost of the assignment whose bit `i` is `x_i`.
    pub fn evaluate(&self, x: usize) -> f64 {
        let bit = |i: usize| ((x >> i) & 1) as f64;
        let lin: f64 = self.linear.iter().map(|(&i, &a)| a * bit(i)).sum();
        let quad: f64 = self.quadratic.iter().map(|(&(i, j), &b)| b * bit(i) * bit(j)).sum();
        self.offset + lin + quad
    }
}

/// Substitutes `x_i = (1 - z_i) / 2`. Returns the Ising Hamiltonian (zero
/// constant offset) and the constant that restores the QUBO value:
/// `ising_energy(z) + offset = C(x)`.
pub fn qubo_to_ising(q: &QuboSpec) -> Result<(HamiltonianSpec, f64)> {
    let n = q.n_vars;
    let mut fields = alloc::vec![0.0; n];
    let mut offset = q.offset;
    for (&i, &a) in &q.linear {
        fields[i] -= a / 2.0;
        offset += a / 2.0;
    }
    let mut couplings = Vec::with_capacity(q.quadratic.len());
    for (&(i, j), &b) in &q.quadratic {
        fields[i] -= b / 4.0;
        fields[j] -= b / 4.0;
        offset += b / 4.0;
        couplings.push(((i, j), b / 4.0));
    }
    let mut terms = Vec::new();
    for (i, &h) in fields.iter().enumerate() {
        if h != 0.0 {
            terms.push(PauliTerm::z(h, i));
        }
    }
    for ((i, j), jij) in couplings {
        if jij != 0.0 {
            terms.push(PauliTerm::zz(jij, i, j));
        }
    }
    Ok((HamiltonianSpec::new(n, terms, 0.0)?, offset))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_example() {
        let mut q = QuboSpec::new(2).unwrap();
        q.add_linear(0, 1.0).unwrap();
        q.add_quadratic(0, 1, 2.0).unwrap();
        let (h, off) = qubo_to_ising(&q).unwrap();
        assert_eq!(h.terms(), &[PauliTerm::z(-1.0, 0), PauliTerm::z(-0.5, 1), PauliTerm::zz(0.5, 0, 1)]);
        assert_eq!(off, 1.0);
        // x = (1, 1) -> z = (-1, -1)
        assert_eq!(h.classical_energy(0b11).unwrap() + off, 3.0);
        assert_eq!(q.evaluate(0b11), 3.0);
    }

    #[test]
    fn zero_cost() {
        let q = QuboSpec::new(3).unwrap();
        let (h, off) = qubo_to_ising(&q).unwrap();
        assert!(h.terms().is_empty());
        assert_eq!(off, 0.0);
    }

    #[test]
    fn diagonal_quadratic_folds_into_linear() {
        let mut q = QuboSpec::new(2).unwrap();
        q.add_quadratic(1, 1, 3.0).unwrap();
        q.add_quadratic(1, 0, 1.0).unwrap();
        assert_eq!(q.linear().get(&1), Some(&3.0));
        assert_eq!(q.quadratic().get(&(0, 1)), Some(&1.0));
        assert!(q.add_linear(2, 1.0).is_err());
    }
}
