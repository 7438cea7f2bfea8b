//! Small dense kernels: vector ops, dense Hermitian eigensolver, and
//! rectangular assignment.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::Scalar;

/// `sum conj(a_i) b_i`.
#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * *y;
    }
    acc
}

pub fn norm<T: Scalar>(a: &[T]) -> f64 {
    libm::sqrt(a.iter().map(|x| x.norm_sqr()).sum::<f64>())
}

/// `y += alpha * x`.
#[inline]
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

pub fn scale<T: Scalar>(x: &mut [T], r: f64) {
    for xi in x.iter_mut() {
        *xi = xi.scale(r);
    }
}

/// Linear combination `sum_j coeffs[j] * basis[j]`.
pub fn combine<T: Scalar>(basis: &[Vec<T>], coeffs: &[T], dim: usize) -> Vec<T> {
    let mut out = vec![T::zero(); dim];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != T::zero() {
            axpy(c, b, &mut out);
        }
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix given as rows. Returns
/// ascending eigenvalues and the matching eigenvectors as columns
/// (`vectors[i][j]` is component `i` of eigenvector `j`).
pub fn hermitian_eigen<T: Scalar>(matrix: &[Vec<T>]) -> (Vec<f64>, Vec<Vec<T>>) {
    let n = matrix.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let (values, column): (Vec<f64>, Vec<Vec<T>>) = if T::IS_COMPLEX {
        let e = DMatrix::from_fn(n, n, |i, j| matrix[i][j].to_complex()).symmetric_eigen();
        let cols = (0..n).map(|j| (0..n).map(|i| T::from_complex(e.eigenvectors[(i, j)])).collect()).collect();
        (e.eigenvalues.iter().copied().collect(), cols)
    } else {
        let e = DMatrix::from_fn(n, n, |i, j| matrix[i][j].re()).symmetric_eigen();
        let cols = (0..n).map(|j| (0..n).map(|i| T::from_real(e.eigenvectors[(i, j)])).collect()).collect();
        (e.eigenvalues.iter().copied().collect(), cols)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vectors = (0..n).map(|r| order.iter().map(|&c| column[c][r]).collect()).collect();
    (sorted, vectors)
}

/// Minimum-cost assignment of every row to a distinct column
/// (`rows <= cols`), Hungarian method with potentials. Returns the column of
/// each row.
pub fn assign_min_cost(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cost[0].len();
    assert!(n <= m, "more rows than columns");
    // 1-based arrays; column 0 is the virtual start.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}
