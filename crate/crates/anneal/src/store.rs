//! Run directories.
//!
//! Layout of a run:
//!
//! ```text
//! meta.json            metadata, settings and sha256 digests of every file
//! HI.txt, HP.txt       the Hamiltonians in term-file form
//! spectrum.csv         s, E0..E{k-1}
//! residuals.csv        s, r0..r{k-1}
//! observables.csv      s, state, qubit, z        (optional)
//! zz.csv               s, state, i, j, zz        (optional)
//! tracking.csv         step, sorted_idx, branch_id, overlap   (optional)
//! eigvecs/step_NNNNN.bin                          (optional)
//! COMPLETE             written last
//! ```
//!
//! Eigenvector files hold the magic `ANNEIG1\0`, then little-endian `u32`
//! `n_qubits`, `nev`, `complex_flag`, then `nev` vectors of `2^N` little-endian
//! `f64` values, as `(re, im)` pairs when `complex_flag` is 1.
//!
//! Floats in CSV files carry 17 significant digits, which reproduces every
//! `f64` exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anneal_core::{
    parse_hamiltonian, serialize_hamiltonian, Complex64, HamiltonianSpec, Scalar, Schedule, SpectralSnapshot,
    SpectralSweep, StateVector, SweepConfig,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::IoContext;
use crate::{Error, Result};

pub const FORMAT_VERSION: &str = "1.0";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MARKER: &str = "COMPLETE";
pub const META: &str = "meta.json";
pub const EIGVEC_MAGIC: &[u8; 8] = b"ANNEIG1\0";
pub const EIGVEC_HEADER_LEN: u64 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
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
    pub warm_start: bool,
    pub seed: u64,
}

impl From<&SweepConfig> for SweepSettings {
    fn from(c: &SweepConfig) -> Self {
        SweepSettings {
            s_start: c.s_start,
            s_end: c.s_end,
            s_steps: c.s_steps,
            nev: c.nev,
            tolerance: c.tolerance,
            max_iterations: c.max_iterations,
            save_eigenvectors: c.save_eigenvectors,
            track_by_overlap: c.track_by_overlap,
            track_observables: c.track_observables,
            track_zz: c.track_zz,
            warm_start: c.warm_start,
            seed: c.seed,
        }
    }
}

impl SweepSettings {
    pub fn to_config(&self) -> SweepConfig {
        SweepConfig {
            s_start: self.s_start,
            s_end: self.s_end,
            s_steps: self.s_steps,
            nev: self.nev,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            save_eigenvectors: self.save_eigenvectors,
            track_by_overlap: self.track_by_overlap,
            track_observables: self.track_observables,
            track_zz: self.track_zz,
            warm_start: self.warm_start,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleRecord {
    Linear,
    Tabulated { table: Vec<[f64; 3]> },
}

impl From<&Schedule> for ScheduleRecord {
    fn from(s: &Schedule) -> Self {
        match s {
            Schedule::Linear => ScheduleRecord::Linear,
            Schedule::Tabulated(t) => ScheduleRecord::Tabulated { table: t.iter().map(|&(s, a, b)| [s, a, b]).collect() },
        }
    }
}

impl ScheduleRecord {
    pub fn to_schedule(&self) -> Result<Schedule> {
        Ok(match self {
            ScheduleRecord::Linear => Schedule::Linear,
            ScheduleRecord::Tabulated { table } => Schedule::tabulated(table.iter().map(|r| (r[0], r[1], r[2])).collect())?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub format_version: String,
    pub tool_version: String,
    pub created_unix: u64,
    pub n_qubits: usize,
    pub complex: bool,
    pub sweep: SweepSettings,
    pub schedule: ScheduleRecord,
    /// Where the Hamiltonians came from, e.g. the input paths and driver strength.
    #[serde(default)]
    pub inputs: BTreeMap<String, serde_json::Value>,
    /// Command line that produced the run.
    #[serde(default)]
    pub command: Vec<String>,
    /// Relative path -> sha256 of every file except `meta.json` and the marker.
    #[serde(default)]
    pub files: BTreeMap<String, String>,
}

impl RunMeta {
    pub fn new(n_qubits: usize, complex: bool, cfg: &SweepConfig, schedule: &Schedule) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        RunMeta {
            format_version: FORMAT_VERSION.into(),
            tool_version: TOOL_VERSION.into(),
            created_unix,
            n_qubits,
            complex,
            sweep: cfg.into(),
            schedule: schedule.into(),
            inputs: BTreeMap::new(),
            command: Vec::new(),
            files: BTreeMap::new(),
        }
    }
}

/// `[step][state][amplitude]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvectors {
    Real(Vec<Vec<Vec<f64>>>),
    Complex(Vec<Vec<Vec<Complex64>>>),
}

impl Eigenvectors {
    pub fn is_complex(&self) -> bool {
        matches!(self, Eigenvectors::Complex(_))
    }

    pub fn steps(&self) -> usize {
        match self {
            Eigenvectors::Real(v) => v.len(),
            Eigenvectors::Complex(v) => v.len(),
        }
    }
}

/// `tracking.csv` contents.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingTable {
    /// `[step][sorted index]` -> branch id.
    pub branch: Vec<Vec<Option<usize>>>,
    pub overlap: Vec<Vec<f64>>,
}

/// Everything a run directory stores.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub meta: RunMeta,
    pub hi: HamiltonianSpec,
    pub hp: HamiltonianSpec,
    pub s: Vec<f64>,
    pub energies: Vec<Vec<f64>>,
    pub residuals: Vec<Vec<f64>>,
    pub eigenvectors: Option<Eigenvectors>,
    /// `[step][state][qubit]`.
    pub z_expect: Option<Vec<Vec<Vec<f64>>>>,
    /// `[step][state][i][j]`.
    pub zz: Option<Vec<Vec<Vec<Vec<f64>>>>>,
    pub tracking: Option<TrackingTable>,
}

fn collect<T, U>(snaps: &[SpectralSnapshot<T>], f: impl Fn(&SpectralSnapshot<T>) -> Option<U>) -> Option<Vec<U>> {
    snaps.iter().map(f).collect()
}

impl RunRecord {
    pub fn from_sweep<T: Scalar>(sweep: &SpectralSweep<T>, hi: &HamiltonianSpec, hp: &HamiltonianSpec, meta: RunMeta) -> Self {
        let snaps = &sweep.snapshots;
        let eigenvectors = collect(snaps, |s| s.eigenvectors.clone()).map(|steps| {
            if T::IS_COMPLEX {
                Eigenvectors::Complex(
                    steps.iter().map(|vs| vs.iter().map(|v| v.iter().map(|x| x.to_complex()).collect()).collect()).collect(),
                )
            } else {
                Eigenvectors::Real(steps.iter().map(|vs| vs.iter().map(|v| v.iter().map(|x| x.re()).collect()).collect()).collect())
            }
        });
        RunRecord {
            meta,
            hi: hi.clone(),
            hp: hp.clone(),
            s: snaps.iter().map(|x| x.s).collect(),
            energies: snaps.iter().map(|x| x.energies.clone()).collect(),
            residuals: snaps.iter().map(|x| x.residual_norms.clone()).collect(),
            eigenvectors,
            z_expect: collect(snaps, |s| s.z_expect.clone()),
            zz: collect(snaps, |s| s.zz_corr.clone()),
            tracking: sweep
                .tracking
                .as_ref()
                .map(|t| TrackingTable { branch: t.permutations.clone(), overlap: t.overlaps.clone() }),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.meta.n_qubits
    }

    pub fn nev(&self) -> usize {
        self.energies.first().map_or(0, Vec::len)
    }

    /// Rebuilds the sweep, converting stored eigenvectors to `T`.
    pub fn to_sweep<T: Scalar>(&self) -> Result<SpectralSweep<T>> {
        if !T::IS_COMPLEX && self.eigenvectors.as_ref().is_some_and(Eigenvectors::is_complex) {
            return Err(Error::Core(anneal_core::Error::ComplexOperator));
        }
        let vectors = |t: usize| -> Result<Option<Vec<StateVector<T>>>> {
            let conv: anneal_core::Result<Vec<StateVector<T>>> = match &self.eigenvectors {
                None => return Ok(None),
                Some(Eigenvectors::Real(e)) => {
                    e[t].iter().map(|v| StateVector::from_vec(v.iter().map(|&x| T::from_real(x)).collect())).collect()
                }
                Some(Eigenvectors::Complex(e)) => {
                    e[t].iter().map(|v| StateVector::from_vec(v.iter().map(|&x| T::from_complex(x)).collect())).collect()
                }
            };
            Ok(Some(conv?))
        };
        let mut snapshots = Vec::with_capacity(self.s.len());
        for t in 0..self.s.len() {
            snapshots.push(SpectralSnapshot {
                s: self.s[t],
                energies: self.energies[t].clone(),
                eigenvectors: vectors(t)?,
                z_expect: self.z_expect.as_ref().map(|z| z[t].clone()),
                zz_corr: self.zz.as_ref().map(|z| z[t].clone()),
                residual_norms: self.residuals[t].clone(),
            });
        }
        Ok(SpectralSweep { config: self.meta.sweep.to_config(), n_qubits: self.n_qubits(), snapshots, tracking: None })
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Table builder for the CSV outputs.
pub(crate) struct Table {
    w: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: impl IntoIterator<Item = S>) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header.into_iter().map(|h| h.as_ref().to_owned())).expect("in-memory write");
        Table { w }
    }

    pub fn row<S: AsRef<[u8]>>(&mut self, fields: impl IntoIterator<Item = S>) {
        self.w.write_record(fields).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.w.into_inner().expect("in-memory flush")
    }
}

/// Which CSV series to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvSelection {
    pub spectrum: bool,
    pub residuals: bool,
    pub observables: bool,
    pub zz: bool,
    pub tracking: bool,
}

impl CsvSelection {
    pub const ALL: CsvSelection = CsvSelection { spectrum: true, residuals: true, observables: true, zz: true, tracking: true };

    /// Every series the run holds.
    pub fn available(run: &RunRecord) -> Self {
        CsvSelection {
            spectrum: true,
            residuals: true,
            observables: run.z_expect.is_some(),
            zz: run.zz.is_some(),
            tracking: run.tracking.is_some(),
        }
    }
}

fn level_table(s: &[f64], rows: &[Vec<f64>], prefix: &str) -> Vec<u8> {
    let k = rows.first().map_or(0, Vec::len);
    let mut t = Table::new(std::iter::once("s".to_string()).chain((0..k).map(|i| format!("{prefix}{i}"))));
    for (x, r) in s.iter().zip(rows) {
        t.row(std::iter::once(fmt_f64(*x)).chain(r.iter().map(|&v| fmt_f64(v))));
    }
    t.into_bytes()
}

/// Renders the selected series as `(file name, contents)`.
pub fn render_csv(run: &RunRecord, sel: CsvSelection) -> Result<Vec<(String, Vec<u8>)>> {
    let mut out = Vec::new();
    if sel.spectrum {
        out.push(("spectrum.csv".into(), level_table(&run.s, &run.energies, "E")));
    }
    if sel.residuals {
        out.push(("residuals.csv".into(), level_table(&run.s, &run.residuals, "r")));
    }
    if sel.observables {
        let z = run.z_expect.as_ref().ok_or(Error::Missing("spin observables"))?;
        let mut t = Table::new(["s", "state", "qubit", "z"]);
        for (x, states) in run.s.iter().zip(z) {
            for (k, qs) in states.iter().enumerate() {
                for (q, v) in qs.iter().enumerate() {
                    t.row([fmt_f64(*x), k.to_string(), q.to_string(), fmt_f64(*v)]);
                }
            }
        }
        out.push(("observables.csv".into(), t.into_bytes()));
    }
    if sel.zz {
        let zz = run.zz.as_ref().ok_or(Error::Missing("spin correlations"))?;
        let mut t = Table::new(["s", "state", "i", "j", "zz"]);
        for (x, states) in run.s.iter().zip(zz) {
            for (k, m) in states.iter().enumerate() {
                for (i, row) in m.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        t.row([fmt_f64(*x), k.to_string(), i.to_string(), j.to_string(), fmt_f64(*v)]);
                    }
                }
            }
        }
        out.push(("zz.csv".into(), t.into_bytes()));
    }
    if sel.tracking {
        let tr = run.tracking.as_ref().ok_or(Error::Missing("tracking"))?;
        let mut t = Table::new(["step", "sorted_idx", "branch_id", "overlap"]);
        for (step, (bs, os)) in tr.branch.iter().zip(&tr.overlap).enumerate() {
            for (i, (b, o)) in bs.iter().zip(os).enumerate() {
                t.row([step.to_string(), i.to_string(), b.map_or(String::new(), |b| b.to_string()), fmt_f64(*o)]);
            }
        }
        out.push(("tracking.csv".into(), t.into_bytes()));
    }
    Ok(out)
}

/// Writes the selected CSV series into `dir`.
pub fn export_csv(run: &RunRecord, sel: CsvSelection, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).at(dir)?;
    render_csv(run, sel)?
        .into_iter()
        .map(|(name, bytes)| {
            let p = dir.join(name);
            fs::write(&p, bytes).at(&p)?;
            Ok(p)
        })
        .collect()
}

pub fn eigvec_name(step: usize) -> String {
    format!("eigvecs/step_{step:05}.bin")
}

pub fn encode_eigvecs(n_qubits: usize, vectors: &Eigenvectors, step: usize) -> Vec<u8> {
    let (nev, complex) = match vectors {
        Eigenvectors::Real(v) => (v[step].len(), 0u32),
        Eigenvectors::Complex(v) => (v[step].len(), 1u32),
    };
    let dim = 1usize << n_qubits;
    let mut out = Vec::with_capacity(EIGVEC_HEADER_LEN as usize + nev * dim * 16);
    out.extend_from_slice(EIGVEC_MAGIC);
    for h in [n_qubits as u32, nev as u32, complex] {
        out.extend_from_slice(&h.to_le_bytes());
    }
    match vectors {
        Eigenvectors::Real(v) => v[step].iter().flatten().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
        Eigenvectors::Complex(v) => v[step].iter().flatten().for_each(|x| {
            out.extend_from_slice(&x.re.to_le_bytes());
            out.extend_from_slice(&x.im.to_le_bytes());
        }),
    }
    out
}

/// Expected size of an eigenvector file.
pub fn eigvec_file_len(n_qubits: usize, nev: usize, complex: bool) -> u64 {
    EIGVEC_HEADER_LEN + (nev as u64) * (1u64 << n_qubits) * if complex { 16 } else { 8 }
}

/// Contents of one eigenvector file.
#[derive(Debug, Clone, PartialEq)]
pub enum StepVectors {
    Real(Vec<Vec<f64>>),
    Complex(Vec<Vec<Complex64>>),
}

/// Decodes one file into its qubit count and `nev` vectors.
pub fn decode_eigvecs(path: &Path, bytes: &[u8]) -> Result<(usize, StepVectors)> {
    let bad = |m: &str| Error::Eigvec { path: path.into(), message: m.into() };
    if bytes.len() < EIGVEC_HEADER_LEN as usize || &bytes[..8] != EIGVEC_MAGIC {
        return Err(bad("missing ANNEIG1 header"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[8 + 4 * i..12 + 4 * i].try_into().unwrap()) as usize;
    let (n, nev, flag) = (word(0), word(1), word(2));
    if flag > 1 || n >= 48 {
        return Err(bad("corrupt header"));
    }
    let expected = eigvec_file_len(n, nev, flag == 1);
    if bytes.len() as u64 != expected {
        return Err(Error::Size { path: path.into(), expected, found: bytes.len() as u64 });
    }
    let dim = 1usize << n;
    let mut vals = bytes[EIGVEC_HEADER_LEN as usize..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let body = if flag == 0 {
        StepVectors::Real((0..nev).map(|_| vals.by_ref().take(dim).collect()).collect())
    } else {
        StepVectors::Complex((0..nev)
            .map(|_| (0..dim).map(|_| Complex64::new(vals.next().unwrap(), vals.next().unwrap())).collect())
            .collect())
    };
    Ok((n, body))
}

struct Writer<'a> {
    dir: &'a Path,
    files: &'a mut BTreeMap<String, String>,
}

impl Writer<'_> {
    fn put(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let p = self.dir.join(rel);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent).at(parent)?;
        }
        fs::write(&p, bytes).at(&p)?;
        self.files.insert(rel.to_owned(), sha256_hex(bytes));
        Ok(())
    }
}

fn write_meta(dir: &Path, meta: &RunMeta) -> Result<()> {
    let p = dir.join(META);
    let text = serde_json::to_string_pretty(meta).map_err(|source| Error::Meta { path: p.clone(), source })?;
    fs::write(&p, text + "\n").at(&p)
}

fn write_marker(dir: &Path) -> Result<()> {
    let p = dir.join(MARKER);
    fs::write(&p, b"").at(&p)
}

fn prepare_dir(dest: &Path, overwrite: bool) -> Result<()> {
    if dest.exists() {
        let non_empty = fs::read_dir(dest).at(dest)?.next().is_some();
        if non_empty {
            if !overwrite {
                return Err(Error::Exists(dest.into()));
            }
            fs::remove_dir_all(dest).at(dest)?;
        }
    }
    fs::create_dir_all(dest).at(dest)
}

/// Writes a run directory; the completion marker goes last.
pub fn write_run(run: &RunRecord, dest: &Path, overwrite: bool) -> Result<()> {
    prepare_dir(dest, overwrite)?;
    let mut meta = run.meta.clone();
    meta.files.clear();
    let mut w = Writer { dir: dest, files: &mut meta.files };
    w.put("HI.txt", serialize_hamiltonian(&run.hi).as_bytes())?;
    w.put("HP.txt", serialize_hamiltonian(&run.hp).as_bytes())?;
    for (name, bytes) in render_csv(run, CsvSelection::available(run))? {
        w.put(&name, &bytes)?;
    }
    if let Some(ev) = &run.eigenvectors {
        for step in 0..ev.steps() {
            w.put(&eigvec_name(step), &encode_eigvecs(run.n_qubits(), ev, step))?;
        }
    }
    write_meta(dest, &meta)?;
    write_marker(dest)
}

/// Adds files to a finished run and records their digests.
pub fn add_files(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<()> {
    let mut meta = read_meta(dir)?;
    let marker = dir.join(MARKER);
    fs::remove_file(&marker).at(&marker)?;
    let mut w = Writer { dir, files: &mut meta.files };
    for (name, bytes) in files {
        w.put(name, bytes)?;
    }
    write_meta(dir, &meta)?;
    write_marker(dir)
}

pub fn is_complete(dir: &Path) -> bool {
    dir.join(MARKER).is_file()
}

fn check_version(v: &str) -> Result<()> {
    let major = |s: &str| s.split('.').next().map(str::to_owned);
    if major(v) != major(FORMAT_VERSION) || v.split('.').any(|p| p.parse::<u32>().is_err()) {
        return Err(Error::Version { found: v.into(), supported: FORMAT_VERSION.into() });
    }
    Ok(())
}

/// Metadata of a complete run, version-checked.
pub fn read_meta(dir: &Path) -> Result<RunMeta> {
    if !is_complete(dir) {
        return Err(Error::Incomplete(dir.into()));
    }
    let p = dir.join(META);
    let text = fs::read_to_string(&p).at(&p)?;
    let meta: RunMeta = serde_json::from_str(&text).map_err(|source| Error::Meta { path: p, source })?;
    check_version(&meta.format_version)?;
    Ok(meta)
}

fn read_csv(dir: &Path, name: &str, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let p = dir.join(name);
    let mut r = csv::Reader::from_path(&p).map_err(|source| Error::Csv { path: p.clone(), source })?;
    let got = r.headers().map_err(|source| Error::Csv { path: p.clone(), source })?.clone();
    let matches = if header.last() == Some(&"*") {
        got.len() >= header.len() - 1 && header[..header.len() - 1].iter().zip(&got).all(|(a, b)| *a == b)
    } else {
        got.iter().eq(header.iter().copied())
    };
    if !matches {
        return Err(Error::Parse { path: p, message: format!("unexpected header {got:?}") });
    }
    r.records().collect::<Result<_, _>>().map_err(|source| Error::Csv { path: p, source })
}

fn num<T: std::str::FromStr>(dir: &Path, name: &str, field: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Parse { path: dir.join(name), message: format!("bad number {field:?}") })
}

fn read_levels(dir: &Path, name: &str) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let rows = read_csv(dir, name, &["s", "*"])?;
    let mut s = Vec::with_capacity(rows.len());
    let mut vals = Vec::with_capacity(rows.len());
    for r in &rows {
        s.push(num(dir, name, &r[0])?);
        vals.push(r.iter().skip(1).map(|f| num(dir, name, f)).collect::<Result<_>>()?);
    }
    Ok((s, vals))
}

/// Reads and verifies a complete run directory.
pub fn read_run(dir: &Path) -> Result<RunRecord> {
    let meta = read_meta(dir)?;
    let n = meta.n_qubits;
    let steps = meta.sweep.s_steps;

    // Sizes first so truncated binaries are reported as such.
    let eig_names: Vec<&String> = meta.files.keys().filter(|k| k.starts_with("eigvecs/")).collect();
    for name in &eig_names {
        let p = dir.join(name);
        let len = fs::metadata(&p).at(&p)?.len();
        let expected = eigvec_file_len(n, meta.sweep.nev, meta.complex);
        if len != expected {
            return Err(Error::Size { path: p, expected, found: len });
        }
    }
    let mut contents: BTreeMap<&str, Vec<u8>> = BTreeMap::new();
    for (name, digest) in &meta.files {
        let p = dir.join(name);
        let bytes = fs::read(&p).at(&p)?;
        if &sha256_hex(&bytes) != digest {
            return Err(Error::Digest(p));
        }
        contents.insert(name, bytes);
    }
    let text = |name: &str| -> Result<String> {
        let b = contents.get(name).ok_or_else(|| Error::Parse { path: dir.join(name), message: "not listed in meta.json".into() })?;
        String::from_utf8(b.clone()).map_err(|_| Error::Parse { path: dir.join(name), message: "not UTF-8".into() })
    };
    let spec = |name: &str| -> Result<HamiltonianSpec> {
        parse_hamiltonian(&text(name)?, n).map_err(|e| Error::Parse { path: dir.join(name), message: e.to_string() })
    };
    let hi = spec("HI.txt")?;
    let hp = spec("HP.txt")?;
    let (s, energies) = read_levels(dir, "spectrum.csv")?;
    let (_, residuals) = read_levels(dir, "residuals.csv")?;
    let k = energies.first().map_or(0, Vec::len);
    if s.len() != steps {
        return Err(Error::Parse { path: dir.join("spectrum.csv"), message: format!("{} rows, expected {steps}", s.len()) });
    }

    let z_expect = if contents.contains_key("observables.csv") {
        let mut z = vec![vec![vec![0.0; n]; k]; steps];
        for (row, r) in read_csv(dir, "observables.csv", &["s", "state", "qubit", "z"])?.iter().enumerate() {
            let (state, q): (usize, usize) = (num(dir, "observables.csv", &r[1])?, num(dir, "observables.csv", &r[2])?);
            z[row / (k * n)][state][q] = num(dir, "observables.csv", &r[3])?;
        }
        Some(z)
    } else {
        None
    };
    let zz = if contents.contains_key("zz.csv") {
        let mut z = vec![vec![vec![vec![0.0; n]; n]; k]; steps];
        for (row, r) in read_csv(dir, "zz.csv", &["s", "state", "i", "j", "zz"])?.iter().enumerate() {
            let state: usize = num(dir, "zz.csv", &r[1])?;
            let (i, j): (usize, usize) = (num(dir, "zz.csv", &r[2])?, num(dir, "zz.csv", &r[3])?);
            z[row / (k * n * n)][state][i][j] = num(dir, "zz.csv", &r[4])?;
        }
        Some(z)
    } else {
        None
    };
    let tracking = if contents.contains_key("tracking.csv") {
        let mut branch = vec![vec![None; k]; steps];
        let mut overlap = vec![vec![0.0; k]; steps];
        for r in read_csv(dir, "tracking.csv", &["step", "sorted_idx", "branch_id", "overlap"])? {
            let (t, i): (usize, usize) = (num(dir, "tracking.csv", &r[0])?, num(dir, "tracking.csv", &r[1])?);
            branch[t][i] = if r[2].is_empty() { None } else { Some(num(dir, "tracking.csv", &r[2])?) };
            overlap[t][i] = num(dir, "tracking.csv", &r[3])?;
        }
        Some(TrackingTable { branch, overlap })
    } else {
        None
    };
    let eigenvectors = if eig_names.is_empty() {
        None
    } else {
        let mut real = Vec::new();
        let mut complex = Vec::new();
        for step in 0..steps {
            let name = eigvec_name(step);
            let p = dir.join(&name);
            let bytes = contents.get(name.as_str()).ok_or_else(|| Error::Eigvec { path: p.clone(), message: "missing".into() })?;
            match (decode_eigvecs(&p, bytes)?.1, meta.complex) {
                (StepVectors::Real(v), false) => real.push(v),
                (StepVectors::Complex(v), true) => complex.push(v),
                _ => return Err(Error::Eigvec { path: p, message: "amplitude type disagrees with meta.json".into() }),
            }
        }
        Some(if meta.complex { Eigenvectors::Complex(complex) } else { Eigenvectors::Real(real) })
    };
    Ok(RunRecord { meta, hi, hp, s, energies, residuals, eigenvectors, z_expect, zz, tracking })
}
