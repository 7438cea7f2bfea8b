//! Lowest eigenpairs of a Hermitian operator, matrix-free.
//!
//! Block Krylov method with thick restart: the search space starts from a
//! block of `nev` vectors (random or supplied), is expanded with the
//! residuals of the unconverged Ritz pairs, and is compressed to the best
//! Ritz vectors when it reaches the maximum subspace size. Every new basis
//! vector is orthogonalized twice against the whole basis. The block start
//! makes degenerate eigenvalues of multiplicity up to `nev` visible, which a
//! single-vector Lanczos start cannot guarantee.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{self, hermitian_eigen};
use crate::operator::LinearOperator;
use crate::rng::SplitMix64;
use crate::state::StateVector;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct EigenOptions {
    pub nev: usize,
    /// Residual bound `||H v - E v|| <= tolerance * max(1, |E|)`.
    pub tolerance: f64,
    /// Defaults to `max(2 nev + 4, 20)`, capped at the dimension.
    pub max_subspace: Option<usize>,
    pub max_iterations: usize,
    /// Seed of the random start block.
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { nev: 8, tolerance: 1e-9, max_subspace: None, max_iterations: 20_000, seed: 0x5eed }
    }
}

#[derive(Debug, Clone)]
pub struct EigenResult<T> {
    /// Ascending.
    pub values: Vec<f64>,
    pub vectors: Vec<StateVector<T>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub matvecs: usize,
}

struct Space<'o, T, Op: ?Sized> {
    op: &'o Op,
    dim: usize,
    v: Vec<Vec<T>>,
    w: Vec<Vec<T>>,
    t: Vec<Vec<T>>,
    matvecs: usize,
}

impl<'o, T: Scalar, Op: LinearOperator<T> + ?Sized> Space<'o, T, Op> {
    fn apply(&mut self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.dim];
        self.op.apply(x, &mut y);
        self.matvecs += 1;
        y
    }

    /// Orthonormalizes `x` against the basis and appends it. Returns false
    /// when `x` is numerically inside the current span.
    fn push(&mut self, mut x: Vec<T>) -> bool {
        if self.v.len() >= self.dim {
            return false;
        }
        let orig = linalg::norm(&x);
        if !(orig > 0.0) || !orig.is_finite() {
            return false;
        }
        for _ in 0..2 {
            for vi in &self.v {
                let h = linalg::dot(vi, &x);
                linalg::axpy(-h, vi, &mut x);
            }
        }
        let nrm = linalg::norm(&x);
        if nrm <= 1e-10 * orig {
            return false;
        }
        linalg::scale(&mut x, 1.0 / nrm);
        let hx = self.apply(&x);
        self.v.push(x);
        self.w.push(hx);
        let j = self.v.len() - 1;
        for row in self.t.iter_mut() {
            row.push(T::zero());
        }
        self.t.push(vec![T::zero(); j + 1]);
        for i in 0..=j {
            let h = linalg::dot(&self.v[i], &self.w[j]);
            if i == j {
                self.t[j][j] = T::from_real(h.re());
            } else {
                self.t[i][j] = h;
                self.t[j][i] = h.conj();
            }
        }
        true
    }

    /// Replaces the basis by the given Ritz combinations.
    fn compress(&mut self, coeffs: &[Vec<T>], values: &[f64]) {
        let v: Vec<Vec<T>> = coeffs.iter().map(|c| linalg::combine(&self.v, c, self.dim)).collect();
        let w: Vec<Vec<T>> = coeffs.iter().map(|c| linalg::combine(&self.w, c, self.dim)).collect();
        let p = coeffs.len();
        self.t = (0..p)
            .map(|i| (0..p).map(|j| if i == j { T::from_real(values[i]) } else { T::zero() }).collect())
            .collect();
        self.v = v;
        self.w = w;
    }

    /// Recomputes `W = H V` and the projection from scratch.
    fn refresh(&mut self) {
        let basis = core::mem::take(&mut self.v);
        self.w.clear();
        self.t.clear();
        for x in basis {
            // Re-orthogonalization also repairs any drift in V.
            self.push(x);
        }
    }
}

fn random_vector<T: Scalar>(rng: &mut SplitMix64, dim: usize) -> Vec<T> {
    (0..dim)
        .map(|_| {
            let re = rng.symmetric();
            let im = if T::IS_COMPLEX { rng.symmetric() } else { 0.0 };
            T::from_complex(Complex64::new(re, im))
        })
        .collect()
}

/// The `nev` smallest-algebraic eigenvalues of a Hermitian operator with
/// orthonormal eigenvectors. `initial` seeds the start block (warm start);
/// missing or dependent start vectors are filled with seeded random vectors.
pub fn lowest_eigenpairs<T, Op>(
    op: &Op,
    opts: &EigenOptions,
    initial: Option<&[StateVector<T>]>,
) -> Result<EigenResult<T>>
where
    T: Scalar,
    Op: LinearOperator<T> + ?Sized,
{
    let dim = op.dim();
    let k = opts.nev;
    if k == 0 {
        return Err(Error::invalid("nev must be at least 1"));
    }
    if k > dim {
        return Err(Error::invalid(alloc::format!("nev = {k} exceeds the dimension {dim}")));
    }
    if !(opts.tolerance > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let subspace = |w: usize| opts.max_subspace.unwrap_or((3 * w + 16).max(32)).max(w + 1).min(dim);
    let mut m_max = subspace(k);

    let mut rng = SplitMix64::new(opts.seed);
    let mut space = Space { op, dim, v: Vec::new(), w: Vec::new(), t: Vec::new(), matvecs: 0 };
    if let Some(init) = initial {
        for x in init.iter().take(k) {
            if x.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: x.dim() });
            }
            space.push(x.to_vec());
        }
    }
    let mut attempts = 0;
    while space.v.len() < k {
        space.push(random_vector(&mut rng, dim));
        attempts += 1;
        if attempts > 10 * k + 10 {
            return Err(Error::NoConvergence { s: None, residuals: Vec::new() });
        }
    }

    let tol = opts.tolerance;
    let mut refreshes = 0;
    let mut last_residuals = vec![f64::INFINITY; k];
    // A block method only sees as many directions of an eigenspace as it was
    // started with, so a degenerate level can come out short. Once the k
    // wanted pairs converge from a cold start, or show a degenerate level, the
    // window is widened by `extra` fresh random directions and iterated
    // again; the result stands when that no longer lowers the k values. A
    // probe that runs past its budget falls back to the verified result.
    let extra = (k / 2).max(2).min(dim - k);
    let mut want = k;
    let mut probed: Option<Vec<f64>> = None;
    let mut fallback: Option<EigenResult<T>> = None;
    let mut probe_deadline = usize::MAX;
    for iteration in 0..opts.max_iterations {
        if iteration >= probe_deadline {
            break;
        }
        let (theta, y) = hermitian_eigen(&space.t);
        let m = space.v.len();
        let column = |j: usize| -> Vec<T> { (0..m).map(|i| y[i][j]).collect() };

        // Residuals r_j = (W - theta_j V) y_j of the wanted Ritz pairs.
        let mut block: Vec<Vec<T>> = Vec::new();
        for j in 0..want.min(m) {
            let mut r = vec![T::zero(); dim];
            for i in 0..m {
                let c = y[i][j];
                if c == T::zero() {
                    continue;
                }
                let cth = c.scale(theta[j]);
                for ((ri, wi), vi) in r.iter_mut().zip(&space.w[i]).zip(&space.v[i]) {
                    *ri += c * *wi - cth * *vi;
                }
            }
            let rn = linalg::norm(&r);
            if j < k {
                last_residuals[j] = rn;
            }
            if rn > tol * theta[j].abs().max(1.0) {
                block.push(r);
            }
        }

        if m >= want && (block.is_empty() || m == dim) {
            // Verify against an explicit application of the operator.
            let coeffs: Vec<Vec<T>> = (0..k).map(column).collect();
            let mut vectors = Vec::with_capacity(k);
            let mut residuals = Vec::with_capacity(k);
            let mut ok = true;
            for (j, c) in coeffs.iter().enumerate() {
                let mut u = linalg::combine(&space.v, c, dim);
                let un = linalg::norm(&u);
                linalg::scale(&mut u, 1.0 / un);
                let hu = space.apply(&u);
                let mut r = hu;
                linalg::axpy(T::from_real(-theta[j]), &u, &mut r);
                let rn = linalg::norm(&r);
                ok &= rn <= tol * theta[j].abs().max(1.0);
                residuals.push(rn);
                vectors.push(StateVector::from_vec(u).expect("power-of-two dimension"));
            }
            let visible = theta[..k].windows(2).any(|p| p[1] - p[0] <= 1e-8 * p[0].abs().max(1.0));
            let settled = m == dim
                || extra == 0
                || match &probed {
                    Some(prev) => prev.iter().zip(&theta[..k]).all(|(a, b)| *b >= a - tol * a.abs().max(1.0)),
                    None => initial.is_some() && !visible,
                };
            let result = EigenResult {
                values: theta[..k].to_vec(),
                vectors,
                residuals: residuals.clone(),
                iterations: iteration + 1,
                matvecs: space.matvecs,
            };
            if ok && settled {
                return Ok(result);
            }
            if ok {
                probed = Some(theta[..k].to_vec());
                fallback = Some(result);
                probe_deadline = iteration.saturating_add(200);
                want = k + extra;
                m_max = subspace(want);
                let keep: Vec<Vec<T>> = (0..k).map(column).collect();
                space.compress(&keep, &theta[..keep.len()]);
                let mut tries = 0;
                while space.v.len() < keep.len() + extra && tries < 4 * extra {
                    space.push(random_vector(&mut rng, dim));
                    tries += 1;
                }
                continue;
            }
            last_residuals = residuals;
            refreshes += 1;
            if refreshes > 3 || m == dim && refreshes > 1 || fallback.is_some() {
                break;
            }
            space.refresh();
            continue;
        }

        let room = m_max.saturating_sub(want).max(1);
        block.truncate(room);
        if m + block.len() > m_max {
            let keep = (m_max - block.len()).max(want).min(m);
            let coeffs: Vec<Vec<T>> = (0..keep).map(column).collect();
            space.compress(&coeffs, &theta[..keep]);
        }
        let before = space.v.len();
        for r in block {
            space.push(r);
        }
        let mut tries = 0;
        while (space.v.len() == before || space.v.len() < want) && space.v.len() < dim && tries < 8 {
            space.push(random_vector(&mut rng, dim));
            tries += 1;
        }
    }
    match fallback {
        Some(result) => Ok(result),
        None => Err(Error::NoConvergence { s: None, residuals: last_residuals }),
    }
}
