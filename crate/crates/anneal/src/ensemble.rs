//! Batches of generated instances, each simulated into its own run
//! directory `out/n{n}/seed{seed}`. Finished runs are reused, so an
//! interrupted batch can be restarted.

use std::fs;
use std::path::{Path, PathBuf};

use anneal_core::derive::{ensemble_summary, gaps_from_energies, min_gap, EnsembleRun, EnsembleSummary};
use anneal_core::problems::{SkDistribution, SkParams};
use anneal_core::{make_driver, Schedule, Serial, SweepConfig};
use rayon::prelude::*;
use serde_json::json;

use crate::error::IoContext;
use crate::generate::{generate, Family};
use crate::post::{render_ensemble, render_histogram, render_minima};
use crate::simulate::simulate;
use crate::store::{is_complete, read_run, write_run, Table};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyTemplate {
    Sk { distribution: SkDistribution, field_scale: f64, pin: bool },
    Fim { j: f64, h: f64 },
    Hw,
    /// Sizes count queries.
    Mqo { plans: usize, density: f64, penalty: Option<f64> },
}

impl FamilyTemplate {
    pub fn instance(&self, size: usize, seed: u64) -> Family {
        match *self {
            FamilyTemplate::Sk { distribution, field_scale, pin } => {
                Family::Sk(SkParams { n: size, seed, distribution, field_scale, pin })
            }
            FamilyTemplate::Fim { j, h } => Family::Fim { n: size, j, h },
            FamilyTemplate::Hw => Family::Hw { n: size },
            FamilyTemplate::Mqo { plans, density, penalty } => {
                Family::Mqo { queries: size, plans, density, seed, penalty }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub family: FamilyTemplate,
    pub sizes: Vec<usize>,
    pub count: usize,
    pub base_seed: u64,
    pub gamma: f64,
    pub sweep: SweepConfig,
    pub out: PathBuf,
    /// Instances simulated concurrently.
    pub jobs: usize,
    pub bins: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub instance: usize,
    pub n: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct EnsembleReport {
    /// Ordered by instance id.
    pub runs: Vec<EnsembleRun>,
    pub failures: Vec<Failure>,
    /// Instances whose run directory was already complete.
    pub reused: usize,
    pub summary: Option<EnsembleSummary>,
}

pub fn run_dir(out: &Path, n: usize, seed: u64) -> PathBuf {
    out.join(format!("n{n}")).join(format!("seed{seed}"))
}

fn one(cfg: &EnsembleConfig, instance: usize, size: usize, seed: u64) -> Result<(EnsembleRun, bool)> {
    let dir = run_dir(&cfg.out, size, seed);
    let reused = is_complete(&dir);
    let run = if reused {
        read_run(&dir)?
    } else {
        let g = generate(&cfg.family.instance(size, seed))?;
        let n = g.spec.n_qubits();
        let hi = make_driver(n, cfg.gamma)?;
        let mut run = simulate(&hi, &g.spec, &Schedule::Linear, &cfg.sweep, &Serial)?;
        run.meta.inputs.insert("instance".into(), g.sidecar);
        run.meta.inputs.insert("instance_seed".into(), json!(seed));
        run.meta.inputs.insert("hi_gamma".into(), json!(cfg.gamma));
        write_run(&run, &dir, true)?;
        run
    };
    let summary = min_gap(&gaps_from_energies(&run.s, &run.energies)?)?;
    Ok((EnsembleRun { instance, n: run.n_qubits(), seed, summary }, reused))
}

pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleReport> {
    if cfg.sizes.is_empty() || cfg.count == 0 {
        return Err(Error::Invalid("ensemble needs at least one size and a positive count".into()));
    }
    if cfg.sweep.nev < 2 {
        return Err(Error::Invalid("ensemble minimum gaps need nev >= 2".into()));
    }
    fs::create_dir_all(&cfg.out).at(&cfg.out)?;
    let jobs: Vec<(usize, usize, u64)> = cfg
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(a, &size)| (0..cfg.count).map(move |i| (a * cfg.count + i, size, i as u64)))
        .map(|(inst, size, i)| (inst, size, cfg.base_seed.wrapping_add(i)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let results: Vec<_> = pool.install(|| {
        jobs.par_iter().map(|&(inst, size, seed)| (inst, size, seed, one(cfg, inst, size, seed))).collect()
    });

    let mut runs = Vec::new();
    let mut failures = Vec::new();
    let mut reused = 0;
    for (instance, n, seed, r) in results {
        match r {
            Ok((run, was_reused)) => {
                reused += usize::from(was_reused);
                runs.push(run);
            }
            Err(e) => failures.push(Failure { instance, n, seed, error: e.to_string() }),
        }
    }
    let summary = if runs.is_empty() { None } else { Some(ensemble_summary(&runs, cfg.bins)?) };

    let put = |name: &str, bytes: Vec<u8>| -> Result<()> {
        let p = cfg.out.join(name);
        fs::write(&p, bytes).at(&p)
    };
    put("minima.csv", render_minima(&runs))?;
    if let Some(s) = &summary {
        put("ensemble.csv", render_ensemble(s, &runs))?;
        put("histogram.csv", render_histogram(s))?;
    }
    let mut t = Table::new(["instance", "n", "seed", "error"]);
    for f in &failures {
        t.row([f.instance.to_string(), f.n.to_string(), f.seed.to_string(), f.error.clone()]);
    }
    put("failures.csv", t.into_bytes())?;
    Ok(EnsembleReport { runs, failures, reused, summary })
}
