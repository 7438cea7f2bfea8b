use alloc::vec::Vec;

use libm::sqrt;

use crate::pauli::{HamiltonianSpec, PauliTerm};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Complete-graph ferromagnet `-J sum_{i<j} Z_i Z_j - h sum_i Z_i`.
pub fn gen_fim(n: usize, j: f64, h: f64) -> Result<HamiltonianSpec> {
    if n < 2 {
        return Err(Error::invalid("ferromagnet needs n >= 2"));
    }
    if !(j > 0.0) || !j.is_finite() || !h.is_finite() {
        return Err(Error::invalid("ferromagnet needs finite J > 0 and finite h"));
    }
    let mut terms = Vec::with_capacity(n * (n + 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            terms.push(PauliTerm::zz(-j, a, b));
        }
    }
    if h != 0.0 {
        terms.extend((0..n).map(|i| PauliTerm::z(-h, i)));
    }
    HamiltonianSpec::new(n, terms, 0.0)
}

/// Hamming weight `sum_i (1 - Z_i) / 2`.
pub fn gen_hw(n: usize) -> Result<HamiltonianSpec> {
    let terms = (0..n).map(|i| PauliTerm::z(-0.5, i)).collect();
    HamiltonianSpec::new(n, terms, 0.5 * n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SkDistribution {
    #[default]
    Gaussian,
    /// Uniform with the same variance as the gaussian.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkParams {
    pub n: usize,
    pub seed: u64,
    pub distribution: SkDistribution,
    /// Standard deviation of the random fields.
    pub field_scale: f64,
    /// Add a dominant field on spin 0 favouring `z_0 = +1`.
    pub pin: bool,
}

impl SkParams {
    pub fn new(n: usize, seed: u64) -> Self {
        SkParams { n, seed, distribution: SkDistribution::Gaussian, field_scale: 1.0, pin: false }
    }
}

fn draw(rng: &mut SplitMix64, dist: SkDistribution, std: f64) -> f64 {
    match dist {
        SkDistribution::Gaussian => std * rng.normal(),
        SkDistribution::Uniform => sqrt(3.0) * std * rng.symmetric(),
    }
}

/// Sherrington-Kirkpatrick spin glass with random fields,
/// `-sum_{i<j} J_ij Z_i Z_j - sum_k h_k Z_k`.
///
/// Couplings are drawn first in `(i, j)` lexicographic order with standard
/// deviation `1/sqrt(n)`, then the fields with standard deviation
/// `field_scale`. Pinning adds `2 (sum_j |J_0j| + |h_0|)` to the field on
/// spin 0.
pub fn gen_sk(p: &SkParams) -> Result<HamiltonianSpec> {
    let n = p.n;
    if n < 2 {
        return Err(Error::invalid("SK model needs n >= 2"));
    }
    if !(p.field_scale >= 0.0) || !p.field_scale.is_finite() {
        return Err(Error::invalid("field_scale must be finite and non-negative"));
    }
    let mut rng = SplitMix64::new(p.seed);
    let std_j = 1.0 / sqrt(n as f64);
    let mut couplings = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            couplings.push((i, j, draw(&mut rng, p.distribution, std_j)));
        }
    }
    let mut fields: Vec<f64> = (0..n).map(|_| draw(&mut rng, p.distribution, p.field_scale)).collect();
    if p.pin {
        let row: f64 = couplings.iter().filter(|c| c.0 == 0).map(|c| c.2.abs()).sum();
        fields[0] += 2.0 * (row + fields[0].abs());
    }
    let mut terms: Vec<PauliTerm> = couplings
        .into_iter()
        .filter(|c| c.2 != 0.0)
        .map(|(i, j, v)| PauliTerm::zz(-v, i, j))
        .collect();
    terms.extend(fields.iter().enumerate().filter(|(_, &h)| h != 0.0).map(|(k, &h)| PauliTerm::z(-h, k)));
    HamiltonianSpec::new(n, terms, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{classical_energies, classical_ground_state};

    #[test]
    fn fim_term_count() {
        assert_eq!(gen_fim(4, 1.0, 0.0).unwrap().terms().len(), 6);
        assert_eq!(gen_fim(4, 1.0, 0.1).unwrap().terms().len(), 10);
        assert!(gen_fim(1, 1.0, 0.0).is_err());
        assert!(gen_fim(3, 0.0, 0.0).is_err());
    }

    #[test]
    fn fim_degenerate_without_field() {
        let e = classical_energies(&gen_fim(4, 1.0, 0.0).unwrap()).unwrap();
        let min = e.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, -6.0);
        assert_eq!(e.iter().filter(|&&x| x == min).count(), 2);
    }

    #[test]
    fn sk_deterministic() {
        let p = SkParams::new(6, 7);
        assert_eq!(gen_sk(&p).unwrap(), gen_sk(&p).unwrap());
        assert_ne!(gen_sk(&p).unwrap(), gen_sk(&SkParams::new(6, 8)).unwrap());
    }

    #[test]
    fn sk_zero_field_is_flip_symmetric() {
        let p = SkParams { field_scale: 0.0, ..SkParams::new(6, 3) };
        let spec = gen_sk(&p).unwrap();
        assert_eq!(spec.terms().len(), 15);
        let e = classical_energies(&spec).unwrap();
        let all = (1usize << 6) - 1;
        for b in 0..e.len() {
            assert!((e[b] - e[b ^ all]).abs() < 1e-12);
        }
    }

    #[test]
    fn pinned_ground_state_has_spin_up() {
        for dist in [SkDistribution::Gaussian, SkDistribution::Uniform] {
            let p = SkParams { pin: true, distribution: dist, ..SkParams::new(8, 42) };
            let (b, _) = classical_ground_state(&gen_sk(&p).unwrap()).unwrap();
            assert_eq!(b & 1, 0);
        }
    }
}
