use alloc::vec::Vec;
use core::ops::{Deref, DerefMut};

use crate::linalg;
use crate::{Error, Result, Scalar};

/// Amplitudes over the `2^N` computational basis states, little-endian in
/// the qubit index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T>(Vec<T>);

impl<T: Scalar> StateVector<T> {
    pub fn zeros(dim: usize) -> Self {
        StateVector(alloc::vec![T::zero(); dim])
    }

    /// Computational basis state `|index>` on `n_qubits`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut v = Self::zeros(1 << n_qubits);
        v.0[index] = T::one();
        v
    }

    /// The length must be a power of two.
    pub fn from_vec(amplitudes: Vec<T>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::invalid("state dimension must be a power of two"));
        }
        Ok(StateVector(amplitudes))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.0)
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> T {
        linalg::dot(&self.0, &other.0)
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            linalg::scale(&mut self.0, 1.0 / n);
        }
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

impl<T> Deref for StateVector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for StateVector<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}
