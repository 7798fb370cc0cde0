use decoh_core::channels::{
    apply_channel, check_complete_positivity, indirect_measurement, indirect_measurement_direct, kraus_from_unitary, KrausChannel,
    LinearMap,
};
use decoh_core::linalg::{partial_trace, Subsystem};
use decoh_core::random::{haar_unitary, random_density_matrix, stream_rng};
use decoh_core::{DensityMatrix, Operator, C64};
use proptest::prelude::*;

fn projectors(d: usize) -> Vec<Operator> {
    (0..d)
        .map(|k| {
            let mut diag = vec![0.0; d];
            diag[k] = 1.0;
            Operator::from_real_diagonal(&diag)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kraus_route_matches_full_evolution(seed in any::<u64>(), ds in 1usize..5, de in 1usize..5) {
        let mut rng = stream_rng(seed, 0);
        let u = haar_unitary(&mut rng, ds * de);
        let rho_s = random_density_matrix(&mut rng, ds);
        let rho_e = random_density_matrix(&mut rng, de);
        let ch = kraus_from_unitary(&u, &rho_e, (ds, de)).unwrap();
        prop_assert!(ch.completeness_deficit() < 1e-9);
        let out = apply_channel(&ch, &rho_s).unwrap();
        let full = rho_s.tensor(&rho_e).conjugate(&u).unwrap();
        let direct = partial_trace(&full, (ds, de), Subsystem::A).unwrap();
        prop_assert!(out.max_abs_diff(&direct) < 1e-10);
        prop_assert!((out.trace().re - 1.0).abs() < 1e-9);
        prop_assert!(out.min_eigenvalue() > -1e-9);
    }

    #[test]
    fn mixed_unitary_channels_preserve_trace(seed in any::<u64>(), d in 1usize..5, k in 1usize..5) {
        let mut rng = stream_rng(seed, 1);
        let weights: Vec<f64> = (0..k).map(|i| 1.0 + i as f64).collect();
        let total: f64 = weights.iter().sum();
        let parts: Vec<(f64, Operator)> = weights.iter().map(|w| (w / total, haar_unitary(&mut rng, d))).collect();
        let ch = KrausChannel::mixed_unitary(&parts).unwrap();
        let rho = random_density_matrix(&mut rng, d);
        let out = ch.apply(&rho).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() < 1e-9);
        prop_assert!(out.min_eigenvalue() > -1e-9);
        prop_assert!(check_complete_positivity(&ch.to_map()).cp);
    }

    #[test]
    fn unread_measurement_equals_channel(seed in any::<u64>(), ds in 1usize..4, de in 2usize..4) {
        let mut rng = stream_rng(seed, 2);
        let u = haar_unitary(&mut rng, ds * de);
        let rho_s = random_density_matrix(&mut rng, ds);
        let rho_e = random_density_matrix(&mut rng, de);
        let outcomes = indirect_measurement(&u, &rho_s, &rho_e, &projectors(de)).unwrap();
        let direct = indirect_measurement_direct(&u, &rho_s, &rho_e, &projectors(de)).unwrap();
        let mut avg = nalgebra::DMatrix::<C64>::zeros(ds, ds);
        for (o, d) in outcomes.iter().zip(&direct) {
            prop_assert!((o.probability - d.probability).abs() < 1e-10);
            if let Some(s) = &o.conditional_state {
                avg += s.matrix() * C64::new(o.probability, 0.0);
            }
        }
        let ch = kraus_from_unitary(&u, &rho_e, (ds, de)).unwrap();
        let unread = apply_channel(&ch, &rho_s).unwrap();
        prop_assert!((avg - unread.matrix()).iter().all(|z| z.norm() < 1e-10));
    }
}

#[test]
fn transposition_is_not_completely_positive() {
    let report = check_complete_positivity(&LinearMap::transpose(2));
    assert!(!report.cp);
    assert!((report.min_choi_eigenvalue + 0.5).abs() < 1e-12);
    let mut rng = stream_rng(3, 0);
    let rho = random_density_matrix(&mut rng, 2);
    let t = LinearMap::transpose(2).apply(rho.matrix()).unwrap();
    assert!(DensityMatrix::new(t).is_ok());
}
