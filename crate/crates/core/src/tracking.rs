//! Overlap-based tracking of eigenstates across the `s` grid.
//!
//! Branch `b` starts as sorted state `b` of the first snapshot. At every later
//! step the active branches are matched to the new sorted states by the
//! assignment that maximizes the summed overlap magnitudes
//! `|<v_i(s_t)|v_j(s_{t-1})>|`. A branch whose matched overlap falls below
//! the loss threshold has left the computed window and stays lost.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::assign_min_cost;
use crate::state::StateVector;
use crate::sweep::SpectralSweep;
use crate::{Error, Result, Scalar};

pub const LOST_THRESHOLD: f64 = 0.5;
/// Relative spacing below which two levels count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedBranches {
    /// `[step][sorted index]` -> branch id, `None` when no active branch
    /// occupies that state.
    pub permutations: Vec<Vec<Option<usize>>>,
    /// `[step][sorted index]` overlap magnitude with the branch's state at
    /// the previous step (1 at step 0, 0 for unoccupied states).
    pub overlaps: Vec<Vec<f64>>,
    /// `[step][sorted index]` phase that makes consecutive overlaps of the
    /// branch real and positive when multiplied onto the sorted eigenvector.
    pub phases: Vec<Vec<Complex64>>,
    /// Step at which each branch was lost.
    pub lost_at: Vec<Option<usize>>,
    /// Steps whose window contains a degenerate pair; the match there is not
    /// unique.
    pub degenerate_steps: Vec<bool>,
}

impl TrackedBranches {
    pub fn n_steps(&self) -> usize {
        self.permutations.len()
    }

    pub fn n_branches(&self) -> usize {
        self.lost_at.len()
    }

    /// Sorted index occupied by `branch` at `step`.
    pub fn sorted_index(&self, step: usize, branch: usize) -> Option<usize> {
        self.permutations[step].iter().position(|&b| b == Some(branch))
    }

    /// True when every step maps sorted state `i` to branch `i`.
    pub fn is_identity(&self) -> bool {
        self.permutations.iter().all(|p| p.iter().enumerate().all(|(i, &b)| b == Some(i)))
    }

    /// `[step][branch]` energies following the branches; `None` once lost.
    pub fn tracked_energies(&self, energies: &[Vec<f64>]) -> Vec<Vec<Option<f64>>> {
        (0..self.n_steps())
            .map(|t| {
                (0..self.n_branches())
                    .map(|b| self.sorted_index(t, b).map(|i| energies[t][i]))
                    .collect()
            })
            .collect()
    }
}

pub(crate) fn has_degenerate_pair(energies: &[f64]) -> bool {
    energies.windows(2).any(|w| w[1] - w[0] <= DEGENERACY_TOL * w[0].abs().max(1.0))
}

/// Incremental tracker fed one snapshot at a time.
#[derive(Debug, Clone)]
pub struct BranchTracker<T> {
    threshold: f64,
    prev: Vec<StateVector<T>>,
    branch_phase: Vec<Complex64>,
    out: TrackedBranches,
}

impl<T: Scalar> BranchTracker<T> {
    pub fn new(threshold: f64) -> Self {
        BranchTracker {
            threshold,
            prev: Vec::new(),
            branch_phase: Vec::new(),
            out: TrackedBranches {
                permutations: Vec::new(),
                overlaps: Vec::new(),
                phases: Vec::new(),
                lost_at: Vec::new(),
                degenerate_steps: Vec::new(),
            },
        }
    }

    pub fn push(&mut self, vectors: &[StateVector<T>], energies: &[f64]) {
        let k = vectors.len();
        let step = self.out.permutations.len();
        self.out.degenerate_steps.push(has_degenerate_pair(energies));
        if step == 0 {
            self.out.permutations.push((0..k).map(Some).collect());
            self.out.overlaps.push(vec![1.0; k]);
            self.out.phases.push(vec![Complex64::new(1.0, 0.0); k]);
            self.out.lost_at = vec![None; k];
            self.branch_phase = vec![Complex64::new(1.0, 0.0); k];
            self.prev = vectors.to_vec();
            return;
        }

        let previous = &self.out.permutations[step - 1];
        // (branch, sorted index at the previous step)
        let active: Vec<(usize, usize)> =
            previous.iter().enumerate().filter_map(|(j, b)| b.map(|b| (b, j))).collect();
        let inner: Vec<Vec<T>> = vectors
            .iter()
            .map(|v| self.prev.iter().map(|p| v.inner(p)).collect())
            .collect();
        let cost: Vec<Vec<f64>> = active
            .iter()
            .map(|&(_, j)| (0..k).map(|i| -inner[i][j].abs() + 1e-12 * i.abs_diff(j) as f64).collect())
            .collect();
        let assignment = if active.is_empty() { Vec::new() } else { assign_min_cost(&cost) };

        let mut perm = vec![None; k];
        let mut overlaps = vec![0.0; k];
        let mut phases = vec![Complex64::new(1.0, 0.0); k];
        for (&(branch, j), &i) in active.iter().zip(&assignment) {
            let ov = inner[i][j];
            let mag = ov.abs();
            overlaps[i] = mag;
            if mag < self.threshold {
                self.out.lost_at[branch] = Some(step);
                continue;
            }
            perm[i] = Some(branch);
            let phase = self.branch_phase[branch] * ov.to_complex() / mag;
            self.branch_phase[branch] = phase;
            phases[i] = phase;
        }
        self.out.permutations.push(perm);
        self.out.overlaps.push(overlaps);
        self.out.phases.push(phases);
        self.prev = vectors.to_vec();
    }

    pub fn finish(self) -> TrackedBranches {
        self.out
    }
}

/// Tracks a sweep that stored its eigenvectors.
pub fn track_branches<T: Scalar>(sweep: &SpectralSweep<T>) -> Result<TrackedBranches> {
    track_branches_with(sweep, LOST_THRESHOLD)
}

pub fn track_branches_with<T: Scalar>(sweep: &SpectralSweep<T>, threshold: f64) -> Result<TrackedBranches> {
    let mut tracker = BranchTracker::new(threshold);
    for snap in &sweep.snapshots {
        let vectors = snap.eigenvectors.as_ref().ok_or(Error::MissingEigenvectors)?;
        tracker.push(vectors, &snap.energies);
    }
    Ok(tracker.finish())
}
