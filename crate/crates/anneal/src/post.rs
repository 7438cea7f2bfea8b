//! Derived series computed from stored runs, and their CSV forms.

use std::path::Path;

use anneal_core::derive::{
    adiabatic_ratio, gaps_from_energies, matrix_elements_with, min_gap, AdiabaticSeries, EnsembleRun,
    EnsembleSummary, GapSeries, MatrixElementSeries, MinGapSummary, StateOrder, DEGENERATE_GAP,
};
use anneal_core::tracking::track_branches;
use anneal_core::{AnnealOperator, Complex64, Executor, Scalar};

use crate::store::{fmt_f64, RunRecord, Table};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct PostOptions {
    /// Compute `H_mn`, `M_mn` and `R`; needs stored eigenvectors.
    pub matrix_elements: bool,
    /// Label matrix elements by tracked branch instead of sorted index.
    pub tracked: bool,
}

#[derive(Debug, Clone)]
pub struct PostOutput {
    pub gaps: GapSeries,
    pub min_gap: MinGapSummary,
    pub matrix: Option<MatrixElementSeries>,
    pub ratio: Option<AdiabaticSeries>,
}

fn elements<T: Scalar, E: Executor>(run: &RunRecord, opts: PostOptions, exec: &E) -> Result<MatrixElementSeries> {
    let sweep = run.to_sweep::<T>()?;
    let schedule = run.meta.schedule.to_schedule()?;
    let op = AnnealOperator::new(&run.hi, &run.hp, schedule)?;
    if opts.tracked {
        let tr = track_branches(&sweep)?;
        Ok(matrix_elements_with(&sweep, &op, exec, StateOrder::Tracked(&tr))?)
    } else {
        Ok(matrix_elements_with(&sweep, &op, exec, StateOrder::Sorted)?)
    }
}

pub fn post_process<E: Executor>(run: &RunRecord, opts: PostOptions, exec: &E) -> Result<PostOutput> {
    let gaps = gaps_from_energies(&run.s, &run.energies)?;
    let mg = min_gap(&gaps)?;
    let (matrix, ratio) = if opts.matrix_elements {
        if run.eigenvectors.is_none() {
            return Err(Error::Missing("eigenvectors (eigvecs/); rerun simulate with -save_eigenvectors"));
        }
        let me = if run.meta.complex { elements::<Complex64, E>(run, opts, exec)? } else { elements::<f64, E>(run, opts, exec)? };
        let r = adiabatic_ratio(&me, &gaps)?;
        (Some(me), Some(r))
    } else {
        (None, None)
    };
    Ok(PostOutput { gaps, min_gap: mg, matrix, ratio })
}

/// `derived.csv`: `s`, `Delta_k0` for `k >= 1`, `Delta_{k+1,k}` for `k >= 1`,
/// `absM_10`, `R`, `flags`. The last three are empty without matrix elements.
pub fn render_derived(out: &PostOutput) -> Vec<u8> {
    let levels = out.gaps.levels();
    let mut header = vec!["s".to_string()];
    header.extend((1..levels).map(|k| format!("Delta_{k}0")));
    header.extend((1..levels.saturating_sub(1)).map(|k| format!("Delta_{}{}", k + 1, k)));
    header.extend(["absM_10".into(), "R".into(), "flags".into()]);
    let mut t = Table::new(header);
    for i in 0..out.gaps.len() {
        let mut row: Vec<String> = vec![fmt_f64(out.gaps.s[i])];
        row.extend(out.gaps.from_ground[i].iter().map(|&x| fmt_f64(x)));
        row.extend(out.gaps.adjacent[i].iter().skip(1).map(|&x| fmt_f64(x)));
        let mut flags = Vec::new();
        if out.gaps.from_ground[i][0] < DEGENERATE_GAP {
            flags.push("degenerate");
        }
        match (&out.ratio, &out.matrix) {
            (Some(r), Some(me)) => {
                row.push(fmt_f64(r.abs_m10[i]));
                row.push(fmt_f64(r.r[i]));
                if r.near_singular[i] {
                    flags.push("near_singular");
                }
                if me.missing[i].iter().take(2).any(|&m| m) {
                    flags.push("lost");
                }
            }
            _ => row.extend([String::new(), String::new()]),
        }
        row.push(flags.join(";"));
        t.row(row);
    }
    t.into_bytes()
}

/// `matrix_elements.csv`: one row per `(s, m, n)`.
pub fn render_matrix_elements(me: &MatrixElementSeries) -> Vec<u8> {
    let mut t = Table::new(["s", "m", "n", "H_re", "H_im", "M_re", "M_im", "degenerate"]);
    for (i, &s) in me.s.iter().enumerate() {
        for (m, row) in me.m[i].iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                let h = me.h[i][m][n];
                t.row([
                    fmt_f64(s),
                    m.to_string(),
                    n.to_string(),
                    fmt_f64(h.re),
                    fmt_f64(h.im),
                    fmt_f64(v.re),
                    fmt_f64(v.im),
                    u8::from(me.degenerate[i][m][n]).to_string(),
                ]);
            }
        }
    }
    t.into_bytes()
}

pub const MINIMA_HEADER: [&str; 6] = ["instance", "n", "seed", "dmin_raw", "dmin_refined", "s_star"];

pub fn render_minima(runs: &[EnsembleRun]) -> Vec<u8> {
    let mut t = Table::new(MINIMA_HEADER);
    for r in runs {
        t.row([
            r.instance.to_string(),
            r.n.to_string(),
            r.seed.to_string(),
            fmt_f64(r.summary.dmin_raw),
            fmt_f64(r.summary.dmin_refined),
            fmt_f64(r.summary.s_star),
        ]);
    }
    t.into_bytes()
}

pub fn read_minima(path: &Path) -> Result<Vec<EnsembleRun>> {
    let csv_err = |source| Error::Csv { path: path.into(), source };
    let bad = |f: &str| Error::Parse { path: path.into(), message: format!("bad field {f:?}") };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    if !r.headers().map_err(csv_err)?.iter().eq(MINIMA_HEADER) {
        return Err(Error::Parse { path: path.into(), message: "unexpected header".into() });
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let f = |i: usize| -> Result<f64> { rec[i].parse().map_err(|_| bad(&rec[i])) };
        let summary = MinGapSummary {
            dmin_raw: f(3)?,
            dmin_refined: f(4)?,
            s_star: f(5)?,
            index: 0,
            degenerate: f(3)? < DEGENERATE_GAP,
        };
        out.push(EnsembleRun {
            instance: rec[0].parse().map_err(|_| bad(&rec[0]))?,
            n: rec[1].parse().map_err(|_| bad(&rec[1]))?,
            seed: rec[2].parse().map_err(|_| bad(&rec[2]))?,
            summary,
        });
    }
    Ok(out)
}

/// `ensemble.csv`: per-size statistics and the picked instances.
pub fn render_ensemble(summary: &EnsembleSummary, runs: &[EnsembleRun]) -> Vec<u8> {
    let mut t = Table::new([
        "n",
        "count",
        "mean",
        "median",
        "min",
        "max",
        "hardest_instance",
        "typical_instance",
        "easiest_instance",
    ]);
    for s in &summary.sizes {
        t.row([
            s.n.to_string(),
            s.count.to_string(),
            fmt_f64(s.mean),
            fmt_f64(s.median),
            fmt_f64(s.min),
            fmt_f64(s.max),
            runs[s.hardest].instance.to_string(),
            runs[s.typical].instance.to_string(),
            runs[s.easiest].instance.to_string(),
        ]);
    }
    t.into_bytes()
}

/// `histogram.csv`: one row per size and bin.
pub fn render_histogram(summary: &EnsembleSummary) -> Vec<u8> {
    let mut t = Table::new(["n", "bin", "lo", "hi", "count"]);
    for s in &summary.sizes {
        let h = &s.histogram;
        for (b, c) in h.counts.iter().enumerate() {
            t.row([s.n.to_string(), b.to_string(), fmt_f64(h.edges[b]), fmt_f64(h.edges[b + 1]), c.to_string()]);
        }
    }
    t.into_bytes()
}
