use anneal_core::problems::{gen_fim, gen_hw};
use anneal_core::sweep::sweep;
use anneal_core::tracking::track_branches;
use anneal_core::{
    lowest_eigenpairs, make_driver, AnnealOperator, Complex64, EigenOptions, HamiltonianSpec, LinearOperator, PauliTerm, Schedule,
    Serial, SpectralSweep, SweepConfig,
};

fn hw_ground(n: usize, s: f64) -> f64 {
    n as f64 * (s / 2.0 - (s * s / 4.0 + (1.0 - s) * (1.0 - s)).sqrt())
}

#[test]
fn hw_sweep_matches_closed_form() {
    let hi = make_driver(4, 1.0).unwrap();
    let hp = gen_hw(4).unwrap();
    let cfg = SweepConfig { nev: 4, s_steps: 201, ..Default::default() };
    let sw: SpectralSweep<f64> = sweep(&hi, &hp, &Schedule::Linear, &cfg).unwrap();
    assert_eq!(sw.snapshots.len(), 201);
    for snap in &sw.snapshots {
        assert!((snap.energies[0] - hw_ground(4, snap.s)).abs() < 1e-8, "s = {}", snap.s);
    }
}

#[test]
fn hw_problem_spectrum_at_end() {
    let hi = make_driver(5, 1.0).unwrap();
    let hp = gen_hw(5).unwrap();
    let op = AnnealOperator::new(&hi, &hp, Schedule::Linear).unwrap();
    let h = op.at::<f64, _>(1.0, &Serial).unwrap();
    let r = lowest_eigenpairs(&h, &EigenOptions { nev: 6, ..Default::default() }, None).unwrap();
    let expect = [0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
    for (e, x) in r.values.iter().zip(expect) {
        assert!((e - x).abs() < 1e-9);
    }
}

fn check_snapshot_invariants(hi: &HamiltonianSpec, hp: &HamiltonianSpec, sw: &SpectralSweep<f64>) {
    let op = AnnealOperator::new(hi, hp, Schedule::Linear).unwrap();
    let tol = sw.config.tolerance;
    for snap in &sw.snapshots {
        let vs = snap.eigenvectors.as_ref().unwrap();
        for i in 0..vs.len() {
            for j in 0..vs.len() {
                let d = if i == j { 1.0 } else { 0.0 };
                assert!((vs[i].inner(&vs[j]) - d).abs() < 1e-8);
            }
        }
        let h = op.at::<f64, _>(snap.s, &Serial).unwrap();
        for (v, &e) in vs.iter().zip(&snap.energies) {
            let mut y = vec![0.0; v.dim()];
            anneal_core::LinearOperator::apply(&h, v, &mut y);
            let r: f64 = y.iter().zip(v.iter()).map(|(a, b)| (a - e * b).powi(2)).sum::<f64>().sqrt();
            assert!(r <= tol * e.abs().max(1.0) * 1.01, "residual {r} at s = {}", snap.s);
        }
        assert!(snap.energies.windows(2).all(|w| w[1] - w[0] >= -1e-10));
    }
}

#[test]
fn fim_snapshots_are_orthonormal_with_small_residuals() {
    let hi = make_driver(6, 1.0).unwrap();
    let hp = gen_fim(6, 1.0, 0.1).unwrap();
    let cfg = SweepConfig { nev: 6, s_steps: 40, save_eigenvectors: true, ..Default::default() };
    let sw = sweep(&hi, &hp, &Schedule::Linear, &cfg).unwrap();
    check_snapshot_invariants(&hi, &hp, &sw);
}

#[test]
fn warm_start_does_not_change_results() {
    let hi = make_driver(6, 1.0).unwrap();
    let hp = gen_fim(6, 1.0, 0.1).unwrap();
    let warm = SweepConfig { nev: 4, s_steps: 50, ..Default::default() };
    let cold = SweepConfig { warm_start: false, ..warm.clone() };
    let a: SpectralSweep<f64> = sweep(&hi, &hp, &Schedule::Linear, &warm).unwrap();
    let b: SpectralSweep<f64> = sweep(&hi, &hp, &Schedule::Linear, &cold).unwrap();
    for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
        for (e, f) in x.energies.iter().zip(&y.energies) {
            assert!((e - f).abs() < 1e-8);
        }
    }
}

#[test]
fn sorted_levels_move_continuously() {
    for (hi, hp) in [
        (make_driver(5, 1.0).unwrap(), gen_hw(5).unwrap()),
        (make_driver(5, 1.0).unwrap(), gen_fim(5, 1.0, 0.1).unwrap()),
    ] {
        let cfg = SweepConfig { nev: 6, ..Default::default() };
        let sw: SpectralSweep<f64> = sweep(&hi, &hp, &Schedule::Linear, &cfg).unwrap();
        let c = hi.coefficient_norm() + hp.coefficient_norm();
        let ds = cfg.step();
        for w in sw.snapshots.windows(2) {
            for (a, b) in w[0].energies.iter().zip(&w[1].energies) {
                assert!((a - b).abs() <= c * ds + 1e-9);
            }
        }
    }
}

#[test]
fn single_state_tracking_is_identity() {
    let hi = make_driver(4, 1.0).unwrap();
    let hp = gen_fim(4, 1.0, 0.1).unwrap();
    let cfg = SweepConfig { nev: 1, s_steps: 30, save_eigenvectors: true, ..Default::default() };
    let sw: SpectralSweep<f64> = sweep(&hi, &hp, &Schedule::Linear, &cfg).unwrap();
    let tr = track_branches(&sw).unwrap();
    assert!(tr.is_identity());
}

#[test]
fn tracking_follows_diabatic_branch_through_narrow_crossing() {
    // H(s) = (1 - 2s) Z + eps (1 - s) X: levels cross near s = 0.5 with a gap
    // far narrower than the grid step.
    let eps = 1e-3;
    let hi = HamiltonianSpec::new(1, vec![PauliTerm::z(1.0, 0), PauliTerm::x(eps, 0)], 0.0).unwrap();
    let hp = HamiltonianSpec::new(1, vec![PauliTerm::z(-1.0, 0)], 0.0).unwrap();
    let cfg = SweepConfig { nev: 2, s_steps: 200, save_eigenvectors: true, track_by_overlap: true, ..Default::default() };
    let sw: SpectralSweep<f64> = sweep(&hi, &hp, &Schedule::Linear, &cfg).unwrap();
    let tr = sw.tracking.clone().unwrap();
    assert_eq!(tr, track_branches(&sw).unwrap());
    let gaps: Vec<f64> = sw.snapshots.iter().map(|s| s.energies[1] - s.energies[0]).collect();
    let tmin = (0..gaps.len()).min_by(|&a, &b| gaps[a].total_cmp(&gaps[b])).unwrap();
    for t in 0..200 {
        let perm = &tr.permutations[t];
        let crossed = sw.snapshots[t].s > 0.5;
        let expect = if crossed { vec![Some(1), Some(0)] } else { vec![Some(0), Some(1)] };
        assert_eq!(perm, &expect, "step {t}");
        if t > 0 {
            assert!(tr.overlaps[t].iter().all(|&o| o > 0.99));
        }
    }
    assert!(sw.snapshots[tmin].s > 0.49 && sw.snapshots[tmin].s < 0.51);
    // Tracked energies are the sorted ones, relabelled.
    let tracked = tr.tracked_energies(&sw.energies());
    for (t, snap) in sw.snapshots.iter().enumerate() {
        let mut e: Vec<f64> = tracked[t].iter().map(|x| x.unwrap()).collect();
        e.sort_by(f64::total_cmp);
        assert_eq!(e, snap.energies);
    }
}

#[test]
fn complex_sweep_with_y_terms() {
    // -X0 - Y0 has eigenvalues +-sqrt(2) for every s in the driver part.
    let hi = HamiltonianSpec::new(1, vec![PauliTerm::x(-1.0, 0), PauliTerm::new(-1.0, vec![(anneal_core::Axis::Y, 0)]).unwrap()], 0.0).unwrap();
    let hp = HamiltonianSpec::empty(1).unwrap();
    let cfg = SweepConfig { nev: 2, s_steps: 3, s_end: 0.5, ..Default::default() };
    let sw: SpectralSweep<Complex64> = sweep(&hi, &hp, &Schedule::Linear, &cfg).unwrap();
    let r2 = 2f64.sqrt();
    assert!((sw.snapshots[0].energies[0] + r2).abs() < 1e-9);
    assert!((sw.snapshots[2].energies[1] - 0.5 * r2).abs() < 1e-9);
    assert!(sweep::<f64>(&hi, &hp, &Schedule::Linear, &cfg).is_err());
}

#[test]
fn degenerate_start_follows_the_sweep() {
    // At s = 0 the first excited driver level is N-fold degenerate; only the
    // symmetric one-flip state continues into the lower branch.
    let hp = gen_fim(8, 1.0, 0.1).unwrap();
    let hi = make_driver(8, 1.0).unwrap();
    let op = AnnealOperator::new(&hi, &hp, Schedule::Linear).unwrap();
    let d = op.derivative_at::<f64, _>(0.0, &Serial).unwrap();
    let cfg = SweepConfig { s_steps: 200, nev: 2, track_by_overlap: true, save_eigenvectors: true, ..SweepConfig::default() };
    let sw = sweep::<f64>(&hi, &hp, &Schedule::Linear, &cfg).unwrap();
    let v = &sw.snapshots[0].eigenvectors.as_ref().unwrap()[1];
    let mut y = vec![0.0; v.dim()];
    d.apply(v, &mut y);
    let slope: f64 = v.iter().zip(&y).map(|(a, b)| a * b).sum();
    assert!((slope + 1.0).abs() < 1e-8, "{slope}");
    let tr = sw.tracking.unwrap();
    assert!(tr.is_identity());
    assert!(tr.overlaps[1][1] > 0.99, "{:?}", tr.overlaps[1]);
}
