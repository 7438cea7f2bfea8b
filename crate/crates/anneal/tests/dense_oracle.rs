use anneal::dense::{dense_hamiltonian, dense_spectrum, eigenvalues};
use anneal_core::problems::{gen_fim, gen_hw, gen_sk, SkParams};
use anneal_core::{
    apply_hamiltonian, lowest_eigenpairs, make_driver, AnnealOperator, Axis, Complex64, EigenOptions,
    HamiltonianSpec, PauliTerm, Schedule, Serial, StateVector,
};
use nalgebra::DVector;
use proptest::prelude::*;

fn term() -> impl Strategy<Value = (f64, Vec<(u8, usize)>)> {
    (-2.0..2.0f64, prop::collection::vec((0u8..3, 0usize..4), 1..4))
}

fn spec_from(n: usize, raw: Vec<(f64, Vec<(u8, usize)>)>) -> HamiltonianSpec {
    let terms = raw
        .into_iter()
        .filter_map(|(c, f)| {
            let mut factors: Vec<(Axis, usize)> = Vec::new();
            for (a, q) in f {
                if q < n && !factors.iter().any(|x| x.1 == q) {
                    factors.push(([Axis::X, Axis::Y, Axis::Z][a as usize], q));
                }
            }
            PauliTerm::new(c, factors).ok()
        })
        .collect();
    HamiltonianSpec::new(n, terms, 0.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_free_matches_dense(
        raw in prop::collection::vec(term(), 1..8),
        s in 0.0..=1.0f64,
        amps in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 16),
    ) {
        let hp = spec_from(4, raw);
        let hi = make_driver(4, 0.7).unwrap();
        let v = StateVector::from_vec(amps.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let got = apply_hamiltonian(&hi, &hp, &Schedule::Linear, s, &v).unwrap();
        let m = dense_hamiltonian(&hi, &hp, &Schedule::Linear, s).unwrap();
        let want = m * DVector::from_column_slice(&v);
        for (a, b) in got.iter().zip(want.iter()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn eigensolver_matches_dense(raw in prop::collection::vec(term(), 1..8), s in 0.0..=1.0f64, nev in 1usize..6) {
        let hp = spec_from(4, raw);
        let hi = make_driver(4, 1.0).unwrap();
        let op = AnnealOperator::new(&hi, &hp, Schedule::Linear).unwrap();
        let h = op.at::<Complex64, _>(s, &Serial).unwrap();
        let res = lowest_eigenpairs(&h, &EigenOptions { nev, ..Default::default() }, None).unwrap();
        let want = eigenvalues(&dense_hamiltonian(&hi, &hp, &Schedule::Linear, s).unwrap());
        for (a, b) in res.values.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-8, "{:?} vs {:?}", res.values, &want[..nev]);
        }
    }
}

#[test]
fn real_path_matches_dense_for_generated_problems() {
    let problems = [gen_fim(6, 1.0, 0.3).unwrap(), gen_sk(&SkParams::new(6, 3)).unwrap(), gen_hw(6).unwrap()];
    let hi = make_driver(6, 1.0).unwrap();
    for hp in &problems {
        let op = AnnealOperator::new(&hi, hp, Schedule::Linear).unwrap();
        for s in [0.0, 0.3, 0.77, 1.0] {
            let h = op.at::<f64, _>(s, &Serial).unwrap();
            let res = lowest_eigenpairs(&h, &EigenOptions { nev: 6, ..Default::default() }, None).unwrap();
            let want = eigenvalues(&dense_hamiltonian(&hi, hp, &Schedule::Linear, s).unwrap());
            for (a, b) in res.values.iter().zip(&want) {
                assert!((a - b).abs() < 1e-8, "s={s}: {:?} vs {:?}", res.values, &want[..6]);
            }
        }
    }
}

#[test]
fn small_spectra() {
    let close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
    assert!(close(&dense_spectrum(&gen_fim(2, 1.0, 0.0).unwrap()).unwrap(), &[-1.0, -1.0, 1.0, 1.0]));
    assert!(close(&dense_spectrum(&gen_hw(3).unwrap()).unwrap(), &[0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0]));
    let fim = dense_spectrum(&gen_fim(4, 1.0, 0.1).unwrap()).unwrap();
    assert!((fim[0] + 6.4).abs() < 1e-12 && fim[1] > fim[0] + 0.1);
    let fim0 = dense_spectrum(&gen_fim(4, 1.0, 0.0).unwrap()).unwrap();
    assert!((fim0[0] + 6.0).abs() < 1e-12 && (fim0[1] + 6.0).abs() < 1e-12 && fim0[2] > -6.0 + 1.0);
    let y = HamiltonianSpec::new(1, vec![PauliTerm::new(1.0, vec![(Axis::Y, 0)]).unwrap()], 0.0).unwrap();
    assert!(close(&dense_spectrum(&y).unwrap(), &[-1.0, 1.0]));
}
