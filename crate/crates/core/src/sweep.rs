//! Eigen-decomposition of `H(s)` over a uniform `s` grid.

use alloc::vec::Vec;

use crate::eigen::{lowest_eigenpairs, EigenOptions, EigenResult};
use crate::linalg::{assign_min_cost, combine, dot, hermitian_eigen};
use crate::observables::{correlations_zz, observables_z};
use crate::operator::{AnnealOperator, Executor, LinearOperator, Serial};
use crate::pauli::HamiltonianSpec;
use crate::schedule::Schedule;
use crate::state::StateVector;
use crate::tracking::{BranchTracker, TrackedBranches, DEGENERACY_TOL, LOST_THRESHOLD};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub s_start: f64,
    pub s_end: f64,
    pub s_steps: usize,
    pub nev: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub save_eigenvectors: bool,
    pub track_by_overlap: bool,
    pub track_observables: bool,
    pub track_zz: bool,
    /// Seed each solve with the previous step's eigenvectors.
    pub warm_start: bool,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            s_start: 0.0,
            s_end: 1.0,
            s_steps: 200,
            nev: 8,
            tolerance: 1e-9,
            max_iterations: EigenOptions::default().max_iterations,
            save_eigenvectors: false,
            track_by_overlap: false,
            track_observables: false,
            track_zz: false,
            warm_start: true,
            seed: 0x5eed,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.s_start) || !(0.0..=1.0).contains(&self.s_end) {
            return Err(Error::invalid("s range must lie in [0, 1]"));
        }
        if !(self.s_start < self.s_end) {
            return Err(Error::invalid("s_start must be smaller than s_end"));
        }
        if self.s_steps < 2 {
            return Err(Error::invalid("s_steps must be at least 2"));
        }
        if self.nev == 0 {
            return Err(Error::invalid("nev must be at least 1"));
        }
        if n_qubits < usize::BITS as usize && self.nev > 1usize << n_qubits {
            return Err(Error::invalid(alloc::format!("nev = {} exceeds 2^N = {}", self.nev, 1usize << n_qubits)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        Ok(())
    }

    /// Grid point `t`, hitting both endpoints exactly.
    pub fn s_at(&self, t: usize) -> f64 {
        if t + 1 == self.s_steps {
            return self.s_end;
        }
        self.s_start + (self.s_end - self.s_start) * t as f64 / (self.s_steps - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.s_steps).map(|t| self.s_at(t)).collect()
    }

    pub fn step(&self) -> f64 {
        (self.s_end - self.s_start) / (self.s_steps - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSnapshot<T> {
    pub s: f64,
    /// Ascending.
    pub energies: Vec<f64>,
    pub eigenvectors: Option<Vec<StateVector<T>>>,
    /// `[state][qubit]`.
    pub z_expect: Option<Vec<Vec<f64>>>,
    /// `[state][i][j]`.
    pub zz_corr: Option<Vec<Vec<Vec<f64>>>>,
    pub residual_norms: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SpectralSweep<T> {
    pub config: SweepConfig,
    pub n_qubits: usize,
    pub snapshots: Vec<SpectralSnapshot<T>>,
    /// Present when `track_by_overlap` was set.
    pub tracking: Option<TrackedBranches>,
}

impl<T> SpectralSweep<T> {
    pub fn s_values(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.s).collect()
    }

    pub fn energies(&self) -> Vec<Vec<f64>> {
        self.snapshots.iter().map(|s| s.energies.clone()).collect()
    }
}

/// Within runs of degenerate energies, orders the states so that each keeps
/// the slot of the previous-step state it overlaps most.
fn order_degenerate<T: Scalar>(energies: &mut [f64], vectors: &mut [StateVector<T>], residuals: &mut [f64], prev: &[StateVector<T>]) {
    let k = energies.len();
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && energies[end] - energies[end - 1] <= DEGENERACY_TOL * energies[end - 1].abs().max(1.0) {
            end += 1;
        }
        if end - start > 1 && end <= prev.len() {
            let cost: Vec<Vec<f64>> = (start..end)
                .map(|i| (start..end).map(|j| -vectors[i].inner(&prev[j]).abs()).collect())
                .collect();
            let slot = assign_min_cost(&cost);
            let e: Vec<f64> = energies[start..end].to_vec();
            let v: Vec<StateVector<T>> = vectors[start..end].to_vec();
            let r: Vec<f64> = residuals[start..end].to_vec();
            for (local, &target) in slot.iter().enumerate() {
                energies[start + target] = e[local];
                vectors[start + target] = v[local].clone();
                residuals[start + target] = r[local];
            }
            // Keep the energy list ascending.
            energies[start..end].sort_by(f64::total_cmp);
        }
        start = end;
    }
}

/// Seed of the random start vectors for solve `i`. Repeating one sequence
/// across warm-started solves would add no new directions.
fn step_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn degenerate(a: f64, b: f64) -> bool {
    (b - a).abs() <= DEGENERACY_TOL * a.abs().max(1.0)
}

/// At the first grid point a degenerate level has no preferred basis. The
/// block holding each degenerate run is completed (past the `nev` window when
/// the run touches its edge) and rotated to diagonalize `dH/ds`, so the states
/// are the ones that continue smoothly in the sweep direction.
fn resolve_start<T: Scalar, E: Executor>(
    op: &AnnealOperator,
    s: f64,
    direction: f64,
    opts: &EigenOptions,
    res: EigenResult<T>,
    exec: &E,
) -> Result<EigenResult<T>> {
    let k = opts.nev;
    let dim = op.dim();
    let mut ext = res;
    // Index one past the block that contains level k - 1.
    let block_end = |v: &[f64]| (k..v.len()).find(|&j| !degenerate(v[j - 1], v[j]));
    let mut round = 0;
    while ext.values.len() < dim && block_end(&ext.values).is_none() {
        round += 1;
        let wider = EigenOptions {
            nev: (2 * ext.values.len()).max(k + 1).min(dim),
            seed: step_seed(opts.seed, round),
            ..opts.clone()
        };
        let h = op.at::<T, E>(s, exec)?;
        ext = lowest_eigenpairs(&h, &wider, Some(&ext.vectors))?;
    }
    let end = block_end(&ext.values).unwrap_or(ext.values.len());
    let d = op.derivative_at::<T, E>(s, exec)?;
    let mut start = 0;
    while start < k {
        let mut stop = start + 1;
        while stop < end && degenerate(ext.values[stop - 1], ext.values[stop]) {
            stop += 1;
        }
        if stop - start > 1 {
            let block: Vec<Vec<T>> = ext.vectors[start..stop].iter().map(|v| v.to_vec()).collect();
            let dv: Vec<Vec<T>> = block
                .iter()
                .map(|v| {
                    let mut y = alloc::vec![T::zero(); dim];
                    d.apply(v, &mut y);
                    y
                })
                .collect();
            let m: Vec<Vec<T>> = block.iter().map(|a| dv.iter().map(|b| dot(a, b)).collect()).collect();
            let (_, rot) = hermitian_eigen(&m);
            let mut order: Vec<usize> = (0..rot.len()).collect();
            if direction < 0.0 {
                order.reverse();
            }
            let worst = ext.residuals[start..stop].iter().fold(0.0f64, |a, &r| a.max(r));
            for (slot, &j) in order.iter().enumerate() {
                let coeffs: Vec<T> = rot.iter().map(|row| row[j]).collect();
                let mut v = StateVector::from_vec(combine(&block, &coeffs, dim))?;
                v.normalize();
                ext.vectors[start + slot] = v;
                ext.residuals[start + slot] = worst;
            }
        }
        start = stop;
    }
    ext.values.truncate(k);
    ext.vectors.truncate(k);
    ext.residuals.truncate(k);
    Ok(ext)
}

/// Sweeps `H(s)` serially.
pub fn sweep<T: Scalar>(
    hi: &HamiltonianSpec,
    hp: &HamiltonianSpec,
    schedule: &Schedule,
    cfg: &SweepConfig,
) -> Result<SpectralSweep<T>> {
    let op = AnnealOperator::new(hi, hp, schedule.clone())?;
    sweep_with(&op, cfg, &Serial)
}

/// Sweeps `H(s)` with the given executor for operator applications.
pub fn sweep_with<T: Scalar, E: Executor>(op: &AnnealOperator, cfg: &SweepConfig, exec: &E) -> Result<SpectralSweep<T>> {
    let n = op.n_qubits();
    cfg.validate(n)?;
    let opts = EigenOptions {
        nev: cfg.nev,
        tolerance: cfg.tolerance,
        max_subspace: None,
        max_iterations: cfg.max_iterations,
        seed: cfg.seed,
    };
    let mut tracker = cfg.track_by_overlap.then(|| BranchTracker::new(LOST_THRESHOLD));
    let mut snapshots = Vec::with_capacity(cfg.s_steps);
    let mut prev: Option<Vec<StateVector<T>>> = None;
    for t in 0..cfg.s_steps {
        let s = cfg.s_at(t);
        let h = op.at::<T, E>(s, exec)?;
        let initial = if cfg.warm_start { prev.as_deref() } else { None };
        let at_s = |e| match e {
            Error::NoConvergence { residuals, .. } => Error::NoConvergence { s: Some(s), residuals },
            other => other,
        };
        let step_opts = EigenOptions { seed: step_seed(cfg.seed, t * 64), ..opts.clone() };
        let mut res = lowest_eigenpairs(&h, &step_opts, initial).map_err(at_s)?;
        if t == 0 {
            res = resolve_start(op, s, cfg.s_end - cfg.s_start, &step_opts, res, exec).map_err(at_s)?;
        }
        let mut energies = res.values;
        let mut vectors = res.vectors;
        let mut residuals = res.residuals;
        if let Some(p) = &prev {
            order_degenerate(&mut energies, &mut vectors, &mut residuals, p);
        }
        if let Some(tr) = tracker.as_mut() {
            tr.push(&vectors, &energies);
        }
        let z_expect = if cfg.track_observables {
            Some(vectors.iter().map(|v| observables_z(v, n)).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        let zz_corr = if cfg.track_zz {
            Some(vectors.iter().map(|v| correlations_zz(v, n)).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        snapshots.push(SpectralSnapshot {
            s,
            energies,
            eigenvectors: cfg.save_eigenvectors.then(|| vectors.clone()),
            z_expect,
            zz_corr,
            residual_norms: residuals,
        });
        prev = Some(vectors);
    }
    Ok(SpectralSweep {
        config: cfg.clone(),
        n_qubits: n,
        snapshots,
        tracking: tracker.map(BranchTracker::finish),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::make_driver;

    #[test]
    fn two_step_grid_hits_endpoints() {
        let cfg = SweepConfig { s_start: 0.2, s_end: 0.7, s_steps: 2, ..Default::default() };
        assert_eq!(cfg.grid(), alloc::vec![0.2, 0.7]);
        let cfg = SweepConfig { s_steps: 201, ..Default::default() };
        let g = cfg.grid();
        assert_eq!(g[0], 0.0);
        assert_eq!(g[200], 1.0);
        assert_eq!(g[100], 0.5);
    }

    #[test]
    fn config_validation() {
        let ok = SweepConfig::default();
        assert!(ok.validate(3).is_ok());
        assert!(SweepConfig { nev: 9, ..ok.clone() }.validate(3).is_err());
        assert!(SweepConfig { s_steps: 1, ..ok.clone() }.validate(3).is_err());
        assert!(SweepConfig { s_start: 0.5, s_end: 0.5, ..ok.clone() }.validate(3).is_err());
        assert!(SweepConfig { s_end: 1.5, ..ok.clone() }.validate(3).is_err());
    }

    #[test]
    fn driver_only_sweep_endpoint() {
        let hi = make_driver(3, 1.0).unwrap();
        let hp = HamiltonianSpec::empty(3).unwrap();
        let cfg = SweepConfig { s_steps: 3, nev: 2, s_end: 0.5, ..Default::default() };
        let sw: SpectralSweep<f64> = sweep(&hi, &hp, &Schedule::Linear, &cfg).unwrap();
        assert_eq!(sw.snapshots.len(), 3);
        assert!((sw.snapshots[0].energies[0] + 3.0).abs() < 1e-9);
        assert!((sw.snapshots[0].energies[1] + 1.0).abs() < 1e-9);
        assert!((sw.snapshots[2].energies[0] + 1.5).abs() < 1e-9);
    }
}
