use std::fs;
use std::path::Path;

use anneal::store::{eigvec_file_len, eigvec_name, read_meta, CsvSelection, META};
use anneal::{read_run, simulate, write_run, Error, RunRecord};
use anneal_core::problems::{gen_fim, gen_sk, SkParams};
use anneal_core::{make_driver, HamiltonianSpec, PauliTerm, Schedule, Serial, SweepConfig};

fn small_run(cfg: SweepConfig) -> RunRecord {
    let hp = gen_fim(4, 1.0, 0.2).unwrap();
    let hi = make_driver(4, 1.0).unwrap();
    simulate(&hi, &hp, &Schedule::Linear, &cfg, &Serial).unwrap()
}

/// Digests exist only once a record has been written.
fn content(mut run: RunRecord) -> RunRecord {
    run.meta.files.clear();
    run
}

fn full_cfg() -> SweepConfig {
    SweepConfig {
        s_steps: 12,
        nev: 4,
        save_eigenvectors: true,
        track_by_overlap: true,
        track_observables: true,
        track_zz: true,
        ..SweepConfig::default()
    }
}

fn set_version(dir: &Path, v: &str) {
    let p = dir.join(META);
    let mut meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    meta["format_version"] = v.into();
    fs::write(&p, serde_json::to_string_pretty(&meta).unwrap()).unwrap();
}

#[test]
fn round_trip_is_exact() {
    let run = small_run(full_cfg());
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("r");
    write_run(&run, &dir, false).unwrap();
    let back = read_run(&dir).unwrap();
    assert!(!back.meta.files.is_empty());
    assert_eq!(content(back), run);
    for name in ["spectrum.csv", "residuals.csv", "observables.csv", "zz.csv", "tracking.csv", "HI.txt", "HP.txt"] {
        assert!(dir.join(name).is_file(), "{name}");
    }
}

#[test]
fn complex_run_round_trips() {
    let hp = HamiltonianSpec::new(
        3,
        vec![
            PauliTerm::zz(-1.0, 0, 1),
            PauliTerm::new(0.4, vec![(anneal_core::Axis::Y, 1), (anneal_core::Axis::Z, 2)]).unwrap(),
            PauliTerm::z(0.3, 2),
        ],
        0.0,
    )
    .unwrap();
    let hi = make_driver(3, 1.0).unwrap();
    let cfg = SweepConfig { s_steps: 6, nev: 3, save_eigenvectors: true, ..SweepConfig::default() };
    let run = simulate(&hi, &hp, &Schedule::Linear, &cfg, &Serial).unwrap();
    assert!(run.meta.complex);
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    assert_eq!(content(read_run(tmp.path()).unwrap()), run);
    let len = fs::metadata(tmp.path().join(eigvec_name(0))).unwrap().len();
    assert_eq!(len, eigvec_file_len(3, 3, true));
    assert_eq!(len, 20 + 3 * 8 * 16);
}

#[test]
fn tabulated_schedule_survives() {
    let sched = Schedule::tabulated(vec![(0.0, 1.0, 0.0), (0.5, 0.6, 0.3), (1.0, 0.0, 1.0)]).unwrap();
    let hp = gen_fim(3, 1.0, 0.1).unwrap();
    let hi = make_driver(3, 1.0).unwrap();
    let cfg = SweepConfig { s_steps: 5, nev: 2, ..SweepConfig::default() };
    let run = simulate(&hi, &hp, &sched, &cfg, &Serial).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    let back = read_run(tmp.path()).unwrap();
    assert_eq!(back.meta.schedule.to_schedule().unwrap(), sched);
}

#[test]
fn optional_files_absent_without_flags() {
    let cfg = SweepConfig { s_steps: 5, nev: 1, ..SweepConfig::default() };
    let run = small_run(cfg);
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    for name in ["observables.csv", "zz.csv", "tracking.csv", "eigvecs"] {
        assert!(!tmp.path().join(name).exists(), "{name}");
    }
    let sel = CsvSelection::available(&run);
    assert!(sel.spectrum && !sel.observables && !sel.tracking);
    // nev = 1: s plus one energy column
    let text = fs::read_to_string(tmp.path().join("spectrum.csv")).unwrap();
    assert!(text.lines().all(|l| l.split(',').count() == 2));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn eigvec_file_size_n10() {
    let hp = gen_sk(&SkParams::new(10, 2)).unwrap();
    let hi = make_driver(10, 1.0).unwrap();
    let cfg = SweepConfig { s_steps: 3, nev: 8, save_eigenvectors: true, ..SweepConfig::default() };
    let run = simulate(&hi, &hp, &Schedule::Linear, &cfg, &Serial).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    for t in 0..3 {
        let len = fs::metadata(tmp.path().join(eigvec_name(t))).unwrap().len();
        assert_eq!(len, 20 + 8 * 1024 * 8);
    }
}

#[test]
fn truncated_eigvec_is_a_size_error() {
    let run = small_run(full_cfg());
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    let p = tmp.path().join(eigvec_name(3));
    let bytes = fs::read(&p).unwrap();
    fs::write(&p, &bytes[..bytes.len() - 8]).unwrap();
    match read_run(tmp.path()) {
        Err(Error::Size { path, expected, found }) => {
            assert_eq!(path, p);
            assert_eq!(expected, found + 8);
        }
        other => panic!("expected a size error, got {other:?}"),
    }
}

#[test]
fn corrupted_file_is_a_digest_error() {
    let run = small_run(full_cfg());
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    let p = tmp.path().join("spectrum.csv");
    let mut text = fs::read_to_string(&p).unwrap();
    text.push('\n');
    fs::write(&p, text).unwrap();
    assert!(matches!(read_run(tmp.path()), Err(Error::Digest(q)) if q == p));
}

#[test]
fn missing_marker_means_incomplete() {
    let run = small_run(full_cfg());
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    fs::remove_file(tmp.path().join("COMPLETE")).unwrap();
    assert!(matches!(read_run(tmp.path()), Err(Error::Incomplete(_))));
}

#[test]
fn version_rule() {
    let run = small_run(SweepConfig { s_steps: 4, nev: 2, ..SweepConfig::default() });
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    set_version(tmp.path(), "1.3");
    assert_eq!(read_meta(tmp.path()).unwrap().format_version, "1.3");
    assert!(read_run(tmp.path()).is_ok());
    set_version(tmp.path(), "2.0");
    assert!(matches!(read_run(tmp.path()), Err(Error::Version { .. })));
}

#[test]
fn overwrite_rule() {
    let run = small_run(SweepConfig { s_steps: 4, nev: 2, ..SweepConfig::default() });
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("out");
    write_run(&run, &dir, false).unwrap();
    assert!(matches!(write_run(&run, &dir, false), Err(Error::Exists(_))));
    write_run(&run, &dir, true).unwrap();
    assert_eq!(content(read_run(&dir).unwrap()), run);
}

#[test]
fn csv_floats_round_trip() {
    let run = small_run(SweepConfig { s_steps: 7, nev: 3, ..SweepConfig::default() });
    let tmp = tempfile::tempdir().unwrap();
    write_run(&run, tmp.path(), true).unwrap();
    let text = fs::read_to_string(tmp.path().join("spectrum.csv")).unwrap();
    let row: Vec<f64> = text.lines().nth(3).unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(row[0].to_bits(), run.s[2].to_bits());
    for (a, b) in row[1..].iter().zip(&run.energies[2]) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
