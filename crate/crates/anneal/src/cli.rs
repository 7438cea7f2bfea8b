//! Command-line front end.
//!
//! Long options are accepted with one or two dashes (`-nev 8` or
//! `--nev 8`). Exit codes: 0 success, 1 I/O or other failure, 2 usage
//! error, 3 input parse error, 4 eigensolver did not converge.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anneal_core::problems::SkParams;
use anneal_core::{make_driver, Schedule, SweepConfig};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::ensemble::{run_ensemble, EnsembleConfig, FamilyTemplate};
use crate::exec::Parallel;
use crate::files::{read_hamiltonian, read_schedule};
use crate::generate::{generate, parse_distribution, write_generated, Family};
use crate::post::{post_process, render_derived, render_matrix_elements, render_minima, PostOptions};
use crate::simulate::simulate;
use crate::store::{add_files, read_run, write_run};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

/// Overrides `-threads` when set.
pub const ENV_THREADS: &str = "ANNEAL_THREADS";
/// Prefix for relative `-out` paths when set.
pub const ENV_OUT_ROOT: &str = "ANNEAL_OUT_ROOT";

#[derive(Debug, Parser)]
#[command(name = "anneal", version, about = "Spectral analysis of quantum annealing Hamiltonians")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep H(s) and write a run directory
    Simulate(SimulateArgs),
    /// Write a generated problem Hamiltonian and its sidecar
    Gen(GenArgs),
    /// Compute gaps, minimum gap, matrix elements and R for a run
    Post(PostArgs),
    /// Simulate a batch of generated instances and summarize minimum gaps
    Ensemble(EnsembleArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("driver").required(true).args(["hi_file", "auto_generate_hi"]))]
struct SimulateArgs {
    /// Number of qubits
    #[arg(short = 'N', long = "N")]
    n: usize,
    /// Number of eigenpairs to compute
    #[arg(long = "nev", default_value_t = 8)]
    nev: usize,
    #[arg(long = "s_start", default_value_t = 0.0)]
    s_start: f64,
    #[arg(long = "s_end", default_value_t = 1.0)]
    s_end: f64,
    /// Number of sampling points
    #[arg(long = "s_steps", default_value_t = 200)]
    s_steps: usize,
    #[arg(long = "HI_file")]
    hi_file: Option<PathBuf>,
    #[arg(long = "HP_file")]
    hp_file: PathBuf,
    /// Use H_I = -gamma sum_i X_i
    #[arg(long = "auto_generate_hi")]
    auto_generate_hi: bool,
    #[arg(long = "hi_gamma", default_value_t = 1.0)]
    hi_gamma: f64,
    #[arg(long = "track_by_overlap")]
    track_by_overlap: bool,
    #[arg(long = "track_observables")]
    track_observables: bool,
    #[arg(long = "track_zz_correlations")]
    track_zz_correlations: bool,
    #[arg(long = "save_eigenvectors")]
    save_eigenvectors: bool,
    /// Run directory
    #[arg(long = "out")]
    out: PathBuf,
    /// Seed of the eigensolver start vectors
    #[arg(long = "seed", default_value_t = 0x5eed)]
    seed: u64,
    /// Table of `s A B` samples; linear schedule otherwise
    #[arg(long = "schedule_file")]
    schedule_file: Option<PathBuf>,
    #[arg(long = "threads")]
    threads: Option<usize>,
    #[arg(long = "overwrite")]
    overwrite: bool,
    /// Residual tolerance relative to max(1, |E|)
    #[arg(long = "tol", default_value_t = 1e-9)]
    tol: f64,
    #[arg(long = "max_iterations", default_value_t = 20_000)]
    max_iterations: usize,
    /// Start every eigensolve from random vectors
    #[arg(long = "no_warm_start")]
    no_warm_start: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FamilyName {
    Fim,
    Sk,
    Hw,
    Mqo,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// Ferromagnet coupling
    #[arg(long = "J", default_value_t = 1.0)]
    j: f64,
    /// Ferromagnet field
    #[arg(long = "field", default_value_t = 0.0)]
    field: f64,
    /// SK coupling and field distribution: gaussian or uniform
    #[arg(long = "dist", default_value = "gaussian")]
    dist: String,
    /// SK field standard deviation
    #[arg(long = "field_scale", default_value_t = 1.0)]
    field_scale: f64,
    /// Pin SK spin 0 to the up state
    #[arg(long = "pin")]
    pin: bool,
    /// MQO plans per query
    #[arg(long = "plans", default_value_t = 2)]
    plans: usize,
    /// MQO saving density
    #[arg(long = "density", default_value_t = 0.25)]
    density: f64,
    /// MQO one-hot penalty
    #[arg(long = "penalty")]
    penalty: Option<f64>,
}

impl FamilyArgs {
    fn template(&self, family: FamilyName) -> Result<FamilyTemplate, Error> {
        Ok(match family {
            FamilyName::Fim => FamilyTemplate::Fim { j: self.j, h: self.field },
            FamilyName::Sk => FamilyTemplate::Sk {
                distribution: parse_distribution(&self.dist)
                    .ok_or_else(|| Error::Invalid(format!("unknown distribution {:?}", self.dist)))?,
                field_scale: self.field_scale,
                pin: self.pin,
            },
            FamilyName::Hw => FamilyTemplate::Hw,
            FamilyName::Mqo => FamilyTemplate::Mqo { plans: self.plans, density: self.density, penalty: self.penalty },
        })
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: FamilyName,
    /// Number of spins (fim, sk, hw)
    #[arg(short = 'N', long = "N")]
    n: Option<usize>,
    /// MQO number of queries
    #[arg(long = "queries")]
    queries: Option<usize>,
    #[arg(long = "seed", default_value_t = 0)]
    seed: u64,
    /// Term file; the sidecar goes next to it
    #[arg(long = "out")]
    out: Option<PathBuf>,
    #[command(flatten)]
    knobs: FamilyArgs,
}

#[derive(Debug, Args)]
struct PostArgs {
    /// Run directory
    #[arg(long = "run")]
    run: PathBuf,
    /// Also compute H_mn, M_mn and R (needs saved eigenvectors)
    #[arg(long = "matrix_elements")]
    matrix_elements: bool,
    /// Label matrix elements by tracked branch
    #[arg(long = "tracked")]
    tracked: bool,
    /// Instance id written to minima.csv
    #[arg(long = "instance", default_value_t = 0)]
    instance: usize,
    #[arg(long = "threads")]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct EnsembleArgs {
    #[arg(long = "family", value_enum)]
    family: FamilyName,
    /// Comma-separated sizes (spins, or queries for mqo)
    #[arg(long = "sizes", value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Instances per size
    #[arg(long = "count", default_value_t = 100)]
    count: usize,
    /// Instance i uses seed base + i
    #[arg(long = "seed", default_value_t = 0)]
    seed: u64,
    #[arg(long = "out")]
    out: PathBuf,
    #[arg(long = "nev", default_value_t = 8)]
    nev: usize,
    #[arg(long = "s_steps", default_value_t = 200)]
    s_steps: usize,
    #[arg(long = "hi_gamma", default_value_t = 1.0)]
    hi_gamma: f64,
    #[arg(long = "tol", default_value_t = 1e-9)]
    tol: f64,
    #[arg(long = "save_eigenvectors")]
    save_eigenvectors: bool,
    /// Concurrent instances
    #[arg(long = "threads")]
    threads: Option<usize>,
    #[arg(long = "bins", default_value_t = 20)]
    bins: usize,
    #[command(flatten)]
    knobs: FamilyArgs,
}

/// Rewrites `-name` to `--name` for multi-letter option names.
pub fn normalize_args<I: IntoIterator<Item = OsString>>(args: I) -> Vec<OsString> {
    args.into_iter()
        .map(|a| match a.to_str() {
            Some(s) if s.len() > 2 && s.starts_with('-') && s.as_bytes()[1].is_ascii_alphabetic() => {
                OsString::from(format!("-{s}"))
            }
            _ => a,
        })
        .collect()
}

struct Failure {
    code: i32,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { code: exit_code(&error), error }
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    use anneal_core::Error as C;
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::Core(C::NoConvergence { .. }) => EXIT_SOLVER,
        Error::Core(C::InvalidArgument(_)) | Error::Exists(_) | Error::Invalid(_) => EXIT_USAGE,
        Error::Core(C::Parse { .. } | C::AtLine { .. } | C::QubitOutOfRange { .. } | C::DuplicateQubit { .. }) => {
            EXIT_PARSE
        }
        _ => EXIT_FAILURE,
    }
}

fn threads(flag: Option<usize>) -> Option<usize> {
    std::env::var(ENV_THREADS).ok().and_then(|v| v.parse().ok()).or(flag)
}

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(ENV_OUT_ROOT) {
        Some(root) if p.is_relative() => PathBuf::from(root).join(p),
        _ => p.to_path_buf(),
    }
}

fn with_threads<T>(n: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error>
where
    T: Send,
{
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = n {
        b = b.num_threads(n.max(1));
    }
    let pool = b.build().map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(pool.install(f))
}

fn run_simulate(a: SimulateArgs, argv: &[String]) -> Result<String, Failure> {
    let cfg = SweepConfig {
        s_start: a.s_start,
        s_end: a.s_end,
        s_steps: a.s_steps,
        nev: a.nev,
        tolerance: a.tol,
        max_iterations: a.max_iterations,
        save_eigenvectors: a.save_eigenvectors,
        track_by_overlap: a.track_by_overlap,
        track_observables: a.track_observables,
        track_zz: a.track_zz_correlations,
        warm_start: !a.no_warm_start,
        seed: a.seed,
    };
    cfg.validate(a.n).map_err(Error::from)?;
    let hp = read_hamiltonian(&a.hp_file, a.n)?;
    let hi = match &a.hi_file {
        Some(p) => read_hamiltonian(p, a.n)?,
        None => make_driver(a.n, a.hi_gamma).map_err(Error::from)?,
    };
    let schedule = match &a.schedule_file {
        Some(p) => read_schedule(p)?,
        None => Schedule::Linear,
    };
    // Tracking needs the vectors even when they are not persisted.
    let mut solve_cfg = cfg.clone();
    solve_cfg.save_eigenvectors |= cfg.track_by_overlap;
    let out = out_path(&a.out);
    if out.exists() && !a.overwrite && std::fs::read_dir(&out).map(|mut d| d.next().is_some()).unwrap_or(false) {
        return Err(Error::Exists(out).into());
    }
    let mut run = with_threads(threads(a.threads), || simulate(&hi, &hp, &schedule, &solve_cfg, &Parallel::new()))??;
    if !cfg.save_eigenvectors {
        run.eigenvectors = None;
    }
    run.meta.sweep = (&cfg).into();
    run.meta.command = argv.to_vec();
    run.meta.inputs.insert("HP_file".into(), json!(a.hp_file));
    match &a.hi_file {
        Some(p) => run.meta.inputs.insert("HI_file".into(), json!(p)),
        None => run.meta.inputs.insert("hi_gamma".into(), json!(a.hi_gamma)),
    };
    if let Some(p) = &a.schedule_file {
        run.meta.inputs.insert("schedule_file".into(), json!(p));
    }
    write_run(&run, &out, a.overwrite)?;
    let last = run.energies.last().map_or(f64::NAN, |e| e[0]);
    Ok(format!("wrote {} ({} steps, E0(s_end) = {last})", out.display(), run.s.len()))
}

fn run_gen(a: GenArgs) -> Result<String, Failure> {
    let family = match a.family {
        FamilyName::Mqo => Family::Mqo {
            queries: a.queries.ok_or_else(|| Error::Invalid("gen mqo needs -queries".into()))?,
            plans: a.knobs.plans,
            density: a.knobs.density,
            seed: a.seed,
            penalty: a.knobs.penalty,
        },
        f => {
            let n = a.n.ok_or_else(|| Error::Invalid("gen needs -N".into()))?;
            match a.knobs.template(f)? {
                FamilyTemplate::Sk { distribution, field_scale, pin } => {
                    Family::Sk(SkParams { n, seed: a.seed, distribution, field_scale, pin })
                }
                t => t.instance(n, a.seed),
            }
        }
    };
    let g = generate(&family)?;
    let name = match a.family {
        FamilyName::Fim => format!("fim_n{}.txt", g.spec.n_qubits()),
        FamilyName::Sk => format!("sk_n{}_seed{}.txt", g.spec.n_qubits(), a.seed),
        FamilyName::Hw => format!("hw_n{}.txt", g.spec.n_qubits()),
        FamilyName::Mqo => format!("mqo_q{}_seed{}.txt", a.queries.unwrap_or(0), a.seed),
    };
    let path = out_path(&a.out.unwrap_or_else(|| PathBuf::from(name)));
    let side = write_generated(&g, &path)?;
    Ok(format!(
        "wrote {} ({} qubits, {} terms) and {}",
        path.display(),
        g.spec.n_qubits(),
        g.spec.terms().len(),
        side.display()
    ))
}

fn run_post(a: PostArgs) -> Result<String, Failure> {
    let run = read_run(&a.run)?;
    let opts = PostOptions { matrix_elements: a.matrix_elements || a.tracked, tracked: a.tracked };
    let out = with_threads(threads(a.threads), || post_process(&run, opts, &Parallel::new()))??;
    let seed = run.meta.inputs.get("instance_seed").and_then(|v| v.as_u64()).unwrap_or(run.meta.sweep.seed);
    let minima = anneal_core::derive::EnsembleRun { instance: a.instance, n: run.n_qubits(), seed, summary: out.min_gap };
    let mut files = vec![("derived.csv".to_string(), render_derived(&out)), ("minima.csv".to_string(), render_minima(&[minima]))];
    if let Some(me) = &out.matrix {
        files.push(("matrix_elements.csv".into(), render_matrix_elements(me)));
    }
    add_files(&a.run, &files)?;
    Ok(format!(
        "Delta_min = {} (grid {}) at s* = {}",
        out.min_gap.dmin_refined, out.min_gap.dmin_raw, out.min_gap.s_star
    ))
}

fn run_ensemble_cmd(a: EnsembleArgs) -> Result<String, Failure> {
    let sweep = SweepConfig {
        nev: a.nev,
        s_steps: a.s_steps,
        tolerance: a.tol,
        save_eigenvectors: a.save_eigenvectors,
        ..SweepConfig::default()
    };
    let cfg = EnsembleConfig {
        family: a.knobs.template(a.family)?,
        sizes: a.sizes,
        count: a.count,
        base_seed: a.seed,
        gamma: a.hi_gamma,
        sweep,
        out: out_path(&a.out),
        jobs: threads(a.threads).unwrap_or_else(rayon::current_num_threads),
        bins: a.bins,
    };
    let report = run_ensemble(&cfg)?;
    let mut msg = format!(
        "{} runs ({} reused), {} failures; summaries in {}",
        report.runs.len(),
        report.reused,
        report.failures.len(),
        cfg.out.display()
    );
    if let Some(s) = &report.summary {
        for z in &s.sizes {
            msg.push_str(&format!("\n  n = {}: median Delta_min = {}", z.n, z.median));
        }
    }
    if !report.failures.is_empty() {
        return Err(Failure { code: EXIT_FAILURE, error: Error::Invalid(format!("{msg}\nsee failures.csv")) });
    }
    Ok(msg)
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let argv = normalize_args(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let text: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let result = match cli.command {
        Command::Simulate(a) => run_simulate(a, &text),
        Command::Gen(a) => run_gen(a),
        Command::Post(a) => run_post(a),
        Command::Ensemble(a) => run_ensemble_cmd(a),
    };
    match result {
        Ok(msg) => {
            println!("{msg}");
            EXIT_OK
        }
        Err(f) => {
            eprintln!("error: {}", f.error);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn single_dash_long_flags() {
        let a = normalize_args(os(&["anneal", "simulate", "-N", "4", "-nev", "2", "--s_steps", "5", "-field", "-0.5"]));
        assert_eq!(a, os(&["anneal", "simulate", "-N", "4", "--nev", "2", "--s_steps", "5", "--field", "-0.5"]));
    }

    #[test]
    fn driver_flags_are_exclusive() {
        let base = ["anneal", "simulate", "-N", "2", "-HP_file", "hp.txt", "-out", "r"];
        let parse = |extra: &[&str]| {
            let mut v = base.to_vec();
            v.extend_from_slice(extra);
            Cli::try_parse_from(normalize_args(os(&v)))
        };
        assert!(parse(&["-auto_generate_hi"]).is_ok());
        assert!(parse(&["-HI_file", "hi.txt"]).is_ok());
        assert!(parse(&[]).is_err());
        assert!(parse(&["-auto_generate_hi", "-HI_file", "hi.txt"]).is_err());
    }

    #[test]
    fn defaults() {
        let c = Cli::try_parse_from(normalize_args(os(&[
            "anneal", "simulate", "-N", "2", "-HP_file", "a", "-auto_generate_hi", "-out", "r",
        ])))
        .unwrap();
        let Command::Simulate(a) = c.command else { panic!() };
        assert_eq!((a.nev, a.s_steps, a.s_start, a.s_end, a.hi_gamma), (8, 200, 0.0, 1.0, 1.0));
    }
}
