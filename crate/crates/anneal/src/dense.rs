//! Dense matrices for small systems, built from Kronecker products of the
//! single-qubit Pauli matrices. Used as an independent check of the
//! matrix-free operator and eigensolver.

use anneal_core::{Axis, HamiltonianSpec, Schedule};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub const MAX_DENSE_QUBITS: usize = 12;

fn pauli(axis: Option<Axis>) -> DMatrix<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let m = match axis {
        None => [l, o, o, l],
        Some(Axis::X) => [o, l, l, o],
        Some(Axis::Y) => [o, -i, i, o],
        Some(Axis::Z) => [l, o, o, -l],
    };
    DMatrix::from_row_slice(2, 2, &m)
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Invalid(format!("dense matrices are limited to {MAX_DENSE_QUBITS} qubits, got {n}")));
    }
    Ok(())
}

/// Full `2^N x 2^N` matrix. Qubit 0 is the rightmost Kronecker factor, so
/// it is the least significant bit of the row index.
pub fn dense_matrix(spec: &HamiltonianSpec) -> Result<DMatrix<Complex64>> {
    let n = spec.n_qubits();
    check_size(n)?;
    let dim = 1usize << n;
    let mut h = DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(spec.constant_offset(), 0.0);
    for term in spec.terms() {
        let mut m = DMatrix::<Complex64>::identity(1, 1);
        for q in (0..n).rev() {
            let axis = term.factors().iter().find(|f| f.1 == q).map(|f| f.0);
            m = m.kronecker(&pauli(axis));
        }
        h += m * Complex64::new(term.coefficient(), 0.0);
    }
    Ok(h)
}

/// `A(s) H_I + B(s) H_P` as a dense matrix.
pub fn dense_hamiltonian(
    hi: &HamiltonianSpec,
    hp: &HamiltonianSpec,
    schedule: &Schedule,
    s: f64,
) -> Result<DMatrix<Complex64>> {
    let v = schedule.eval(s)?;
    Ok(dense_matrix(hi)? * Complex64::new(v.a, 0.0) + dense_matrix(hp)? * Complex64::new(v.b, 0.0))
}

fn is_real(m: &DMatrix<Complex64>) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = if is_real(m) {
        m.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        m.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    v.sort_by(f64::total_cmp);
    v
}

/// Ascending eigenvalues with matching eigenvector columns.
pub fn eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, Vec<DVector<Complex64>>) {
    let e = m.clone().symmetric_eigen();
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let values = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = idx.iter().map(|&i| e.eigenvectors.column(i).into_owned()).collect();
    (values, vectors)
}

/// Full spectrum of a spec.
pub fn dense_spectrum(spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    Ok(eigenvalues(&dense_matrix(spec)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use anneal_core::{make_driver, PauliTerm};

    #[test]
    fn single_z() {
        let spec = HamiltonianSpec::new(1, vec![PauliTerm::z(1.0, 0)], 0.0).unwrap();
        assert_eq!(dense_spectrum(&spec).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn driver_two_qubits() {
        let e = dense_spectrum(&make_driver(2, 1.0).unwrap()).unwrap();
        for (a, b) in e.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn qubit_zero_is_low_bit() {
        // Z on qubit 0 of two: diag(1, -1, 1, -1).
        let spec = HamiltonianSpec::new(2, vec![PauliTerm::z(1.0, 0)], 0.0).unwrap();
        let m = dense_matrix(&spec).unwrap();
        let d: Vec<f64> = (0..4).map(|i| m[(i, i)].re).collect();
        assert_eq!(d, vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn refuses_large() {
        assert!(dense_matrix(&HamiltonianSpec::empty(13).unwrap()).is_err());
    }
}
