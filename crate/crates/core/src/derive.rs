//! Diagnostics computed from a finished sweep: gaps, minimum gap, matrix
//! elements of `H` and `dH/ds`, the adiabatic ratio and ensemble summaries.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::operator::{AnnealOperator, Executor, LinearOperator, Serial};
use crate::pauli::HamiltonianSpec;
use crate::schedule::Schedule;
use crate::state::StateVector;
use crate::sweep::SpectralSweep;
use crate::tracking::TrackedBranches;
use crate::{Error, Result, Scalar};

/// Gaps below this count as exact degeneracies.
pub const DEGENERATE_GAP: f64 = 1e-10;
/// `R` is flagged near-singular when `Delta_10` falls below this.
pub const SINGULAR_GAP: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct GapSeries {
    pub s: Vec<f64>,
    /// `[t][k - 1]` = `E_k - E_0` for `k >= 1`.
    pub from_ground: Vec<Vec<f64>>,
    /// `[t][k]` = `E_{k+1} - E_k`.
    pub adjacent: Vec<Vec<f64>>,
}

impl GapSeries {
    pub fn delta_10(&self) -> Vec<f64> {
        self.from_ground.iter().map(|g| g[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Number of levels the gaps were taken from.
    pub fn levels(&self) -> usize {
        self.from_ground.first().map_or(0, |g| g.len() + 1)
    }
}

pub fn gaps_from_energies(s: &[f64], energies: &[Vec<f64>]) -> Result<GapSeries> {
    if s.len() != energies.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), found: energies.len() });
    }
    let mut from_ground = Vec::with_capacity(s.len());
    let mut adjacent = Vec::with_capacity(s.len());
    for e in energies {
        if e.len() < 2 {
            return Err(Error::invalid("gaps need at least two levels"));
        }
        from_ground.push(e[1..].iter().map(|x| x - e[0]).collect());
        adjacent.push(e.windows(2).map(|w| w[1] - w[0]).collect());
    }
    Ok(GapSeries { s: s.to_vec(), from_ground, adjacent })
}

pub fn gaps<T>(sweep: &SpectralSweep<T>) -> Result<GapSeries> {
    gaps_from_energies(&sweep.s_values(), &sweep.energies())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinGapSummary {
    /// Smallest `Delta_10` on the grid.
    pub dmin_raw: f64,
    /// Vertex of the parabola through the grid minimum and its neighbours.
    pub dmin_refined: f64,
    /// Location of the refined minimum.
    pub s_star: f64,
    /// Grid index of the raw minimum.
    pub index: usize,
    /// Minimum below the degeneracy threshold.
    pub degenerate: bool,
}

/// Minimum of `Delta_10` over the series.
pub fn min_gap(series: &GapSeries) -> Result<MinGapSummary> {
    min_of(&series.s, &series.delta_10())
}

pub(crate) fn min_of(s: &[f64], y: &[f64]) -> Result<MinGapSummary> {
    if s.is_empty() || s.len() != y.len() {
        return Err(Error::invalid("minimum gap needs a non-empty aligned series"));
    }
    let i = (0..y.len()).fold(0, |b, j| if y[j] < y[b] { j } else { b });
    let raw = y[i];
    let mut refined = raw;
    let mut s_star = s[i];
    if i > 0 && i + 1 < y.len() {
        let (x0, x1, x2) = (s[i - 1], s[i], s[i + 1]);
        let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
        // Divided differences: p(x) = y1 + b (x - x1) + c (x - x1)^2.
        let d01 = (y1 - y0) / (x1 - x0);
        let d12 = (y2 - y1) / (x2 - x1);
        let c = (d12 - d01) / (x2 - x0);
        if c > 0.0 {
            let b = d01 + c * (x1 - x0);
            let dx = (-b / (2.0 * c)).clamp(x0 - x1, x2 - x1);
            let v = y1 + b * dx + c * dx * dx;
            if v <= raw {
                refined = v;
                s_star = x1 + dx;
            }
        }
    }
    Ok(MinGapSummary { dmin_raw: raw, dmin_refined: refined, s_star, index: i, degenerate: raw < DEGENERATE_GAP })
}

/// Which labelling of the eigenstates the matrix elements refer to.
#[derive(Debug, Clone, Copy)]
pub enum StateOrder<'a> {
    Sorted,
    Tracked(&'a TrackedBranches),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElementSeries {
    pub s: Vec<f64>,
    /// `[t][m][n]` = `<E_m|H(s)|E_n>`.
    pub h: Vec<Vec<Vec<Complex64>>>,
    /// `[t][m][n]` = `<E_m|dH/ds|E_n>`.
    pub m: Vec<Vec<Vec<Complex64>>>,
    /// `[t][m][n]`: the levels are degenerate, so the entry depends on the
    /// basis chosen inside the degenerate block.
    pub degenerate: Vec<Vec<Vec<bool>>>,
    /// `[t][state]`: the state is missing (tracked branch lost); its entries
    /// are NaN.
    pub missing: Vec<Vec<bool>>,
}

impl MatrixElementSeries {
    pub fn abs_m(&self, m: usize, n: usize) -> Vec<f64> {
        self.m.iter().map(|x| x[m][n].norm()).collect()
    }
}

/// Matrix elements on the sorted states, applied serially.
pub fn matrix_elements<T: Scalar>(
    sweep: &SpectralSweep<T>,
    hi: &HamiltonianSpec,
    hp: &HamiltonianSpec,
    schedule: &Schedule,
) -> Result<MatrixElementSeries> {
    let op = AnnealOperator::new(hi, hp, schedule.clone())?;
    matrix_elements_with(sweep, &op, &Serial, StateOrder::Sorted)
}

pub fn matrix_elements_with<T: Scalar, E: Executor>(
    sweep: &SpectralSweep<T>,
    op: &AnnealOperator,
    exec: &E,
    order: StateOrder<'_>,
) -> Result<MatrixElementSeries> {
    if let StateOrder::Tracked(tr) = order {
        if tr.n_steps() != sweep.snapshots.len() {
            return Err(Error::DimensionMismatch { expected: sweep.snapshots.len(), found: tr.n_steps() });
        }
    }
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let mut out = MatrixElementSeries { s: Vec::new(), h: Vec::new(), m: Vec::new(), degenerate: Vec::new(), missing: Vec::new() };
    for (t, snap) in sweep.snapshots.iter().enumerate() {
        let vectors = snap.eigenvectors.as_ref().ok_or(Error::MissingEigenvectors)?;
        let k = vectors.len();
        // (sorted index, phase) per state label
        let labels: Vec<Option<(usize, Complex64)>> = match order {
            StateOrder::Sorted => (0..k).map(|i| Some((i, Complex64::new(1.0, 0.0)))).collect(),
            StateOrder::Tracked(tr) => (0..tr.n_branches())
                .map(|b| tr.sorted_index(t, b).map(|i| (i, tr.phases[t][i])))
                .collect(),
        };
        let h_op = op.at::<T, E>(snap.s, exec)?;
        let d_op = op.derivative_at::<T, E>(snap.s, exec)?;
        let dim = op.dim();
        let mut hv = Vec::with_capacity(k);
        let mut dv = Vec::with_capacity(k);
        for v in vectors {
            let mut y = vec![T::zero(); dim];
            h_op.apply(v, &mut y);
            hv.push(StateVector::from_vec(y)?);
            let mut y = vec![T::zero(); dim];
            d_op.apply(v, &mut y);
            dv.push(StateVector::from_vec(y)?);
        }
        let nl = labels.len();
        let mut h = vec![vec![nan; nl]; nl];
        let mut m = vec![vec![nan; nl]; nl];
        let mut deg = vec![vec![false; nl]; nl];
        for (a, la) in labels.iter().enumerate() {
            let Some((i, pa)) = *la else { continue };
            for (b, lb) in labels.iter().enumerate() {
                let Some((j, pb)) = *lb else { continue };
                let w = pa.conj() * pb;
                h[a][b] = w * vectors[i].inner(&hv[j]).to_complex();
                m[a][b] = w * vectors[i].inner(&dv[j]).to_complex();
                deg[a][b] = i != j && (snap.energies[i] - snap.energies[j]).abs() < DEGENERATE_GAP;
            }
        }
        out.s.push(snap.s);
        out.h.push(h);
        out.m.push(m);
        out.degenerate.push(deg);
        out.missing.push(labels.iter().map(Option::is_none).collect());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticSeries {
    pub s: Vec<f64>,
    pub abs_m10: Vec<f64>,
    pub delta_10: Vec<f64>,
    /// `|M_10| / Delta_10^2`; unbounded at flagged points.
    pub r: Vec<f64>,
    /// `Delta_10 < SINGULAR_GAP`.
    pub near_singular: Vec<bool>,
}

pub fn adiabatic_ratio(me: &MatrixElementSeries, gaps: &GapSeries) -> Result<AdiabaticSeries> {
    if me.s.len() != gaps.s.len() {
        return Err(Error::DimensionMismatch { expected: gaps.s.len(), found: me.s.len() });
    }
    if me.s.iter().zip(&gaps.s).any(|(a, b)| a != b) {
        return Err(Error::invalid("matrix elements and gaps are on different grids"));
    }
    if me.m.first().map_or(0, Vec::len) < 2 {
        return Err(Error::invalid("adiabatic ratio needs two states"));
    }
    let abs_m10 = me.abs_m(1, 0);
    let delta_10 = gaps.delta_10();
    let r = abs_m10.iter().zip(&delta_10).map(|(m, d)| m / (d * d)).collect();
    let near_singular = delta_10.iter().map(|&d| d < SINGULAR_GAP).collect();
    Ok(AdiabaticSeries { s: gaps.s.clone(), abs_m10, delta_10, r, near_singular })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    pub instance: usize,
    pub n: usize,
    pub seed: u64,
    pub summary: MinGapSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `counts.len() + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeSummary {
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
    /// Indices into the run list.
    pub hardest: usize,
    pub typical: usize,
    pub easiest: usize,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    /// Ascending in `n`.
    pub sizes: Vec<SizeSummary>,
}

fn median(sorted: &[f64]) -> f64 {
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}

/// Per-size statistics of refined minimum gaps. Histograms share `bins`
/// equal-width bins spanning all runs.
pub fn ensemble_summary(runs: &[EnsembleRun], bins: usize) -> Result<EnsembleSummary> {
    if runs.is_empty() {
        return Err(Error::invalid("ensemble summary needs at least one run"));
    }
    if bins == 0 {
        return Err(Error::invalid("histogram needs at least one bin"));
    }
    let value = |r: &EnsembleRun| r.summary.dmin_refined;
    let lo = runs.iter().map(value).fold(f64::INFINITY, f64::min);
    let mut hi = runs.iter().map(value).fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        hi = lo + 1.0;
    }
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|b| if b == bins { hi } else { lo + width * b as f64 }).collect();

    let mut by_size: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, r) in runs.iter().enumerate() {
        by_size.entry(r.n).or_default().push(i);
    }
    let sizes = by_size
        .into_iter()
        .map(|(n, idx)| {
            let vals: Vec<f64> = idx.iter().map(|&i| value(&runs[i])).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let mut sorted = vals.clone();
            sorted.sort_by(f64::total_cmp);
            let pick = |better: &dyn Fn(f64, f64) -> bool| {
                (0..vals.len()).fold(0, |b, j| if better(vals[j], vals[b]) { j } else { b })
            };
            let hardest = idx[pick(&|a, b| a < b)];
            let easiest = idx[pick(&|a, b| a > b)];
            let typical = idx[pick(&|a, b| (a - mean).abs() < (b - mean).abs())];
            let mut counts = vec![0usize; bins];
            for &v in &vals {
                let b = (((v - lo) / width) as usize).min(bins - 1);
                counts[b] += 1;
            }
            SizeSummary {
                n,
                count: vals.len(),
                mean,
                median: median(&sorted),
                min: sorted[0],
                max: sorted[sorted.len() - 1],
                hardest,
                typical,
                easiest,
                histogram: Histogram { edges: edges.clone(), counts },
            }
        })
        .collect();
    Ok(EnsembleSummary { sizes })
}
