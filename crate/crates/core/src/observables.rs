//! Computational-basis spin observables of a state.

use alloc::vec;
use alloc::vec::Vec;

use crate::state::StateVector;
use crate::{Error, Result, Scalar};

const NORM_TOLERANCE: f64 = 1e-6;

fn probabilities<T: Scalar>(v: &StateVector<T>, n: usize) -> Result<Vec<f64>> {
    if v.dim() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, found: v.dim() });
    }
    let p: Vec<f64> = v.iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm: libm::sqrt(total) });
    }
    Ok(p)
}

/// `<Z_i> = sum_b |v_b|^2 (1 - 2 bit_i(b))` for every qubit.
pub fn observables_z<T: Scalar>(v: &StateVector<T>, n: usize) -> Result<Vec<f64>> {
    let p = probabilities(v, n)?;
    let mut z = vec![0.0; n];
    for (b, &pb) in p.iter().enumerate() {
        for (i, zi) in z.iter_mut().enumerate() {
            if (b >> i) & 1 == 0 {
                *zi += pb;
            } else {
                *zi -= pb;
            }
        }
    }
    Ok(z)
}

/// Symmetric `N x N` matrix of `<Z_i Z_j>`, unit diagonal.
pub fn correlations_zz<T: Scalar>(v: &StateVector<T>, n: usize) -> Result<Vec<Vec<f64>>> {
    let p = probabilities(v, n)?;
    let mut zz = vec![vec![0.0; n]; n];
    for (b, &pb) in p.iter().enumerate() {
        if pb == 0.0 {
            continue;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if ((b >> i) ^ (b >> j)) & 1 == 0 {
                    zz[i][j] += pb;
                } else {
                    zz[i][j] -= pb;
                }
            }
        }
    }
    for i in 0..n {
        zz[i][i] = 1.0;
        for j in (i + 1)..n {
            zz[j][i] = zz[i][j];
        }
    }
    Ok(zz)
}
