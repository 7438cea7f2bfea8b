use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use anneal::read_run;
use anneal::store::is_complete;

fn anneal(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anneal"))
        .args(args)
        .current_dir(dir)
        .env_remove("ANNEAL_OUT_ROOT")
        .env_remove("ANNEAL_THREADS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_simulate_post() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = anneal(d, &["gen", "hw", "-N", "5", "-out", "hw.txt"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(d.join("hw.txt.meta.json").is_file());

    let o = anneal(
        d,
        &[
            "simulate", "-N", "5", "-nev", "4", "-s_steps", "201", "-HP_file", "hw.txt", "-auto_generate_hi",
            "-save_eigenvectors", "-track_by_overlap", "-track_observables", "-out", "run",
        ],
    );
    assert_eq!(code(&o), 0, "{o:?}");
    let run = read_run(&d.join("run")).unwrap();
    assert_eq!(run.s.len(), 201);
    assert_eq!(run.energies[0].len(), 4);
    assert!((run.energies[200][0] - 0.0).abs() < 1e-9);

    let o = anneal(d, &["post", "-run", "run", "-matrix_elements"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("Delta_min = 0.89442"));
    for name in ["derived.csv", "minima.csv", "matrix_elements.csv"] {
        assert!(d.join("run").join(name).is_file(), "{name}");
    }
    // post re-records digests, so the run still verifies
    read_run(&d.join("run")).unwrap();

    let o = anneal(d, &["post", "--run", "run", "--tracked"]);
    assert_eq!(code(&o), 0, "{o:?}");
}

#[test]
fn existing_output_needs_overwrite() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&anneal(d, &["gen", "fim", "-N", "3", "-field", "0.1", "-out", "f.txt"])), 0);
    let args = ["simulate", "-N", "3", "-nev", "2", "-s_steps", "5", "-HP_file", "f.txt", "-auto_generate_hi", "-out", "r"];
    assert_eq!(code(&anneal(d, &args)), 0);
    assert_eq!(code(&anneal(d, &args)), 2);
    let mut again = args.to_vec();
    again.push("-overwrite");
    assert_eq!(code(&anneal(d, &again)), 0);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    fs::write(d.join("bad.txt"), "1.0 Q 0\n").unwrap();
    fs::write(d.join("ok.txt"), "-1.0 Z 0 Z 1\n").unwrap();
    let sim = |hp: &str, extra: &[&str]| {
        let mut v = vec!["simulate", "-N", "2", "-s_steps", "3", "-HP_file", hp, "-out", "r", "-overwrite"];
        v.extend_from_slice(extra);
        code(&anneal(d, &v))
    };
    assert_eq!(sim("bad.txt", &["-auto_generate_hi", "-nev", "2"]), 3);
    assert_eq!(sim("missing.txt", &["-auto_generate_hi", "-nev", "2"]), 1);
    // nev > 2^N
    assert_eq!(sim("ok.txt", &["-auto_generate_hi", "-nev", "5"]), 2);
    // both or neither driver source
    assert_eq!(sim("ok.txt", &["-nev", "2"]), 2);
    assert_eq!(sim("ok.txt", &["-auto_generate_hi", "-HI_file", "ok.txt", "-nev", "2"]), 2);
    assert_eq!(sim("ok.txt", &["-auto_generate_hi", "-nev", "2"]), 0);
    // qubit index beyond N
    fs::write(d.join("wide.txt"), "1.0 Z 3\n").unwrap();
    assert_eq!(sim("wide.txt", &["-auto_generate_hi", "-nev", "2"]), 3);
    // solver budget too small
    assert_eq!(sim("ok.txt", &["-auto_generate_hi", "-nev", "2", "-max_iterations", "0", "-no_warm_start"]), 4);
    assert_eq!(code(&anneal(d, &["bogus"])), 2);
}

#[test]
fn post_without_eigenvectors() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&anneal(d, &["gen", "sk", "-N", "4", "-seed", "3", "-out", "sk.txt"])), 0);
    let o = anneal(d, &["simulate", "-N", "4", "-nev", "3", "-s_steps", "20", "-HP_file", "sk.txt", "-auto_generate_hi", "-out", "r"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert_eq!(code(&anneal(d, &["post", "-run", "r"])), 0);
    assert_eq!(code(&anneal(d, &["post", "-run", "r", "-matrix_elements"])), 1);
    assert_eq!(code(&anneal(d, &["post", "-run", "nowhere"])), 1);
}

#[test]
fn gen_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    for name in ["a.txt", "b.txt"] {
        assert_eq!(code(&anneal(d, &["gen", "sk", "-N", "6", "-seed", "9", "-pin", "-out", name])), 0);
    }
    assert_eq!(fs::read(d.join("a.txt")).unwrap(), fs::read(d.join("b.txt")).unwrap());
    assert_eq!(code(&anneal(d, &["gen", "sk", "-N", "6", "-seed", "10", "-out", "c.txt"])), 0);
    assert_ne!(fs::read(d.join("a.txt")).unwrap(), fs::read(d.join("c.txt")).unwrap());

    assert_eq!(code(&anneal(d, &["gen", "mqo", "-queries", "3", "-plans", "2", "-seed", "1", "-out", "m.txt"])), 0);
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("m.txt.meta.json")).unwrap()).unwrap();
    assert_eq!(side["n_qubits"], 6);
    assert_eq!(code(&anneal(d, &["gen", "mqo", "-out", "x.txt"])), 2);
}

#[test]
fn out_root_env() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path().join("root");
    fs::create_dir(&root).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_anneal"))
        .args(["gen", "hw", "-N", "3", "-out", "hw.txt"])
        .current_dir(tmp.path())
        .env("ANNEAL_OUT_ROOT", &root)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(root.join("hw.txt").is_file());
}

#[test]
fn ensemble_resumes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let args = ["ensemble", "-family", "sk", "-sizes", "3,4", "-count", "3", "-s_steps", "20", "-nev", "2", "-out", "e", "-threads", "2"];
    let o = anneal(d, &args);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("6 runs (0 reused)"));
    let minima = fs::read_to_string(d.join("e/minima.csv")).unwrap();
    assert_eq!(minima.lines().count(), 7);
    for name in ["ensemble.csv", "histogram.csv"] {
        assert!(d.join("e").join(name).is_file());
    }
    assert!(is_complete(&d.join("e/n4/seed2")));

    fs::remove_dir_all(d.join("e/n3/seed1")).unwrap();
    let o = anneal(d, &args);
    assert_eq!(code(&o), 0, "{o:?}");
    assert!(stdout(&o).contains("6 runs (5 reused)"), "{}", stdout(&o));
    assert_eq!(fs::read_to_string(d.join("e/minima.csv")).unwrap(), minima);
}

#[test]
fn ensemble_single_instance() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = anneal(d, &["ensemble", "-family", "fim", "-field", "0.2", "-sizes", "4", "-count", "1", "-s_steps", "15", "-nev", "2", "-out", "e"]);
    assert_eq!(code(&o), 0, "{o:?}");
    assert_eq!(fs::read_to_string(d.join("e/minima.csv")).unwrap().lines().count(), 2);
}
