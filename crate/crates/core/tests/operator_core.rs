use decoh_core::fock::{coherent_overlap, coherent_state, FockSpace};
use decoh_core::linalg::{partial_trace, tensor, Subsystem};
use decoh_core::random::{haar_unitary, random_density_matrix, random_state, stream_rng};
use decoh_core::{DensityMatrix, C64};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_keeps_trace_and_positivity(seed in any::<u64>(), da in 1usize..5, db in 1usize..5) {
        let mut rng = stream_rng(seed, 0);
        let rho = random_density_matrix(&mut rng, da * db);
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(&rho, (da, db), keep).unwrap();
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.min_eigenvalue() > -1e-12);
            prop_assert!(r.hermiticity_deviation() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), da in 1usize..4, db in 1usize..4) {
        let mut rng = stream_rng(seed, 1);
        let a = random_density_matrix(&mut rng, da);
        let b = random_density_matrix(&mut rng, db);
        let ab = a.tensor(&b);
        prop_assert!(partial_trace(&ab, (da, db), Subsystem::A).unwrap().max_abs_diff(&a) < 1e-12);
        prop_assert!(partial_trace(&ab, (da, db), Subsystem::B).unwrap().max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4, d3 in 1usize..4) {
        let mut rng = stream_rng(seed, 2);
        let a = haar_unitary(&mut rng, d1);
        let b = haar_unitary(&mut rng, d2);
        let c = haar_unitary(&mut rng, d3);
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn pure_states_are_idempotent(seed in any::<u64>(), d in 1usize..9) {
        let mut rng = stream_rng(seed, 3);
        let rho = DensityMatrix::pure(&random_state(&mut rng, d));
        let sq = rho.matrix() * rho.matrix();
        prop_assert!((sq - rho.matrix()).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn truncated_coherent_overlap(ar in -1.0f64..1.0, ai in -1.0f64..1.0, br in -1.0f64..1.0, bi in -1.0f64..1.0) {
        let space = FockSpace::new(40).unwrap();
        let r = 40f64.sqrt() / 2.0;
        let clamp = |z: C64| if z.norm() > 1.0 { z / z.norm() * r } else { z * r };
        let (alpha, beta) = (clamp(C64::new(ar, ai)), clamp(C64::new(br, bi)));
        let a = coherent_state(alpha, &space).unwrap();
        let b = coherent_state(beta, &space).unwrap();
        prop_assert!((a.inner(&b) - coherent_overlap(alpha, beta)).norm() < 1e-6);
    }
}

#[test]
fn unitary_conjugation_preserves_spectrum() {
    let mut rng = stream_rng(5, 0);
    let rho = random_density_matrix(&mut rng, 4);
    let u = haar_unitary(&mut rng, 4);
    let mut a = rho.eigenvalues();
    let mut b = rho.conjugate(&u).unwrap().eigenvalues();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}
