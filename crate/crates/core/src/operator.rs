//! Matrix-free application of `H(s) = A(s) H_I + B(s) H_P`.
//!
//! Each output amplitude gathers from its partners: for a term with flip mask
//! `f` (X and Y qubits) and parity mask `p` (Z and Y qubits),
//! `<b|P|b ^ f> = (-i)^{#Y} (-1)^{popcount(b & p)}`. Diagonal terms are folded
//! into one precomputed vector of length `2^N`, so storage is `O(2^N)` plus
//! `O(1)` per off-diagonal term; no matrix is ever formed.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::pauli::{Axis, HamiltonianSpec};
use crate::schedule::Schedule;
use crate::state::StateVector;
use crate::{Error, Result, Scalar};

/// A linear map on state vectors of fixed dimension.
pub trait LinearOperator<T: Scalar> {
    fn dim(&self) -> usize;
    /// `y = A x`; `y` is overwritten.
    fn apply(&self, x: &[T], y: &mut [T]);
}

/// Strategy for filling an output vector whose entries are independent.
///
/// `fill` hands disjoint chunks of `out` to `f` together with the index of
/// their first element. Implementations may run chunks concurrently; since
/// every entry is computed from read-only inputs the result does not depend
/// on the chunking.
pub trait Executor: Sync {
    fn fill<T, F>(&self, out: &mut [T], f: F)
    where
        T: Scalar,
        F: Fn(usize, &mut [T]) + Sync;
}

/// Single-threaded executor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn fill<T, F>(&self, out: &mut [T], f: F)
    where
        T: Scalar,
        F: Fn(usize, &mut [T]) + Sync,
    {
        f(0, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct FlipTerm {
    flip: usize,
    parity: usize,
    coeff: Complex64,
}

/// A Hamiltonian lowered to a diagonal vector plus off-diagonal flip terms.
#[derive(Debug, Clone)]
pub struct CompiledHamiltonian {
    n_qubits: usize,
    diagonal: Vec<f64>,
    flips: Vec<FlipTerm>,
}

impl CompiledHamiltonian {
    pub fn new(spec: &HamiltonianSpec) -> Self {
        let n = spec.n_qubits();
        let dim = spec.dim();
        let mut diagonal = alloc::vec![spec.constant_offset(); dim];
        let mut flips: Vec<FlipTerm> = Vec::new();
        for term in spec.terms() {
            let mut flip = 0usize;
            let mut parity = 0usize;
            let mut n_y = 0u32;
            for &(axis, q) in term.factors() {
                match axis {
                    Axis::X => flip |= 1 << q,
                    Axis::Y => {
                        flip |= 1 << q;
                        parity |= 1 << q;
                        n_y += 1;
                    }
                    Axis::Z => parity |= 1 << q,
                }
            }
            let c = term.coefficient();
            if flip == 0 {
                for (b, d) in diagonal.iter_mut().enumerate() {
                    *d += if (b & parity).count_ones() & 1 == 0 { c } else { -c };
                }
                continue;
            }
            // (-i)^{n_y}
            let coeff = match n_y % 4 {
                0 => Complex64::new(c, 0.0),
                1 => Complex64::new(0.0, -c),
                2 => Complex64::new(-c, 0.0),
                _ => Complex64::new(0.0, c),
            };
            match flips.iter_mut().find(|t| t.flip == flip && t.parity == parity) {
                Some(t) => t.coeff += coeff,
                None => flips.push(FlipTerm { flip, parity, coeff }),
            }
        }
        CompiledHamiltonian { n_qubits: n, diagonal, flips }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// True when all matrix elements are real.
    pub fn is_real(&self) -> bool {
        self.flips.iter().all(|t| t.coeff.im == 0.0)
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }
}

/// The pair `(H_I, H_P)` with a schedule, ready to be evaluated at any `s`.
#[derive(Debug, Clone)]
pub struct AnnealOperator {
    driver: CompiledHamiltonian,
    problem: CompiledHamiltonian,
    schedule: Schedule,
}

impl AnnealOperator {
    pub fn new(driver: &HamiltonianSpec, problem: &HamiltonianSpec, schedule: Schedule) -> Result<Self> {
        if driver.n_qubits() != problem.n_qubits() {
            return Err(Error::DimensionMismatch { expected: driver.n_qubits(), found: problem.n_qubits() });
        }
        Ok(AnnealOperator {
            driver: CompiledHamiltonian::new(driver),
            problem: CompiledHamiltonian::new(problem),
            schedule,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.driver.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.driver.dim()
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn is_real(&self) -> bool {
        self.driver.is_real() && self.problem.is_real()
    }

    /// `H(s)`.
    pub fn at<'a, T: Scalar, E: Executor>(&'a self, s: f64, exec: &'a E) -> Result<WeightedSum<'a, T, E>> {
        let v = self.schedule.eval(s)?;
        self.weighted(v.a, v.b, exec)
    }

    /// `dH/ds = A'(s) H_I + B'(s) H_P`.
    pub fn derivative_at<'a, T: Scalar, E: Executor>(
        &'a self,
        s: f64,
        exec: &'a E,
    ) -> Result<WeightedSum<'a, T, E>> {
        let v = self.schedule.eval(s)?;
        self.weighted(v.da, v.db, exec)
    }

    /// `wa * H_I + wb * H_P`.
    pub fn weighted<'a, T: Scalar, E: Executor>(
        &'a self,
        wa: f64,
        wb: f64,
        exec: &'a E,
    ) -> Result<WeightedSum<'a, T, E>> {
        if !T::IS_COMPLEX && !self.is_real() {
            return Err(Error::ComplexOperator);
        }
        let mut flips: Vec<(usize, usize, T)> = Vec::new();
        for (w, h) in [(wa, &self.driver), (wb, &self.problem)] {
            if w == 0.0 {
                continue;
            }
            for t in &h.flips {
                let c = T::from_complex(t.coeff * w);
                match flips.iter_mut().find(|f| f.0 == t.flip && f.1 == t.parity) {
                    Some(f) => f.2 += c,
                    None => flips.push((t.flip, t.parity, c)),
                }
            }
        }
        Ok(WeightedSum { op: self, wa, wb, flips, exec })
    }
}

/// `wa * H_I + wb * H_P` as a matrix-free operator.
pub struct WeightedSum<'a, T, E> {
    op: &'a AnnealOperator,
    wa: f64,
    wb: f64,
    flips: Vec<(usize, usize, T)>,
    exec: &'a E,
}

impl<T: Scalar, E: Executor> LinearOperator<T> for WeightedSum<'_, T, E> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let di = &self.op.driver.diagonal;
        let dp = &self.op.problem.diagonal;
        let (wa, wb) = (self.wa, self.wb);
        let flips = &self.flips;
        self.exec.fill(y, |start, chunk| {
            for (k, yb) in chunk.iter_mut().enumerate() {
                let b = start + k;
                let mut acc = x[b].scale(wa * di[b] + wb * dp[b]);
                for &(flip, parity, c) in flips {
                    let term = c * x[b ^ flip];
                    if (b & parity).count_ones() & 1 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                *yb = acc;
            }
        });
    }
}

/// `(A(s) H_I + B(s) H_P) v`, compiling both Hamiltonians on the fly.
pub fn apply_hamiltonian<T: Scalar>(
    hi: &HamiltonianSpec,
    hp: &HamiltonianSpec,
    schedule: &Schedule,
    s: f64,
    v: &StateVector<T>,
) -> Result<StateVector<T>> {
    let op = AnnealOperator::new(hi, hp, schedule.clone())?;
    if v.dim() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: v.dim() });
    }
    let h = op.at::<T, _>(s, &Serial)?;
    let mut out = StateVector::zeros(op.dim());
    h.apply(v, &mut out);
    Ok(out)
}
