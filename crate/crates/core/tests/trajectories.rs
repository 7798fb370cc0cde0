use decoh_core::lindblad::{evolve, LindbladGenerator};
use decoh_core::linalg::pauli;
use decoh_core::trajectories::{ensemble_statistics, unravel, unravel_trajectory, TrajectoryConfig};
use decoh_core::{DensityMatrix, StateVector, C64};

fn plus() -> DensityMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(&StateVector::from_amplitudes(&[C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap())
}

fn mean_square_error(n: usize, seed: u64) -> f64 {
    let gen = LindbladGenerator::pure_dephasing_qubit(0.25).unwrap();
    let cfg = TrajectoryConfig::new(n, 5e-3, 1.0, seed).unwrap().with_record_stride(20).unwrap();
    let ens = unravel(&gen, &plus(), &cfg).unwrap();
    let exact = evolve(&gen, &plus(), &cfg.integrator()).unwrap();
    let stats = ensemble_statistics(&ens, &pauli::x()).unwrap();
    let sq: f64 = exact.states.iter().zip(&stats.mean).map(|(r, m)| (r.expectation(&pauli::x()).unwrap() - m).powi(2)).sum();
    sq / stats.mean.len() as f64
}

#[test]
fn ensemble_error_scales_as_inverse_sqrt_n() {
    // RMS error from the mean square over replicas, equal total work per size.
    let total = 16000;
    let mut errs = Vec::new();
    for n in [250usize, 1000, 4000] {
        let reps = total / n;
        let mse: f64 = (0..reps).map(|r| mean_square_error(n, 1000 + r as u64)).sum::<f64>() / reps as f64;
        errs.push(mse.sqrt());
    }
    for w in errs.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.0..=4.0).contains(&ratio), "{errs:?}");
    }
}

#[test]
fn identical_seeds_reproduce_bitwise() {
    let gen = LindbladGenerator::pure_dephasing_qubit(0.8).unwrap();
    let cfg = TrajectoryConfig::new(8, 1e-3, 0.3, 77).unwrap();
    let a = unravel(&gen, &plus(), &cfg).unwrap();
    let b = unravel(&gen, &plus(), &cfg).unwrap();
    assert_eq!(a.conditioned_states, b.conditioned_states);
    // Trajectories do not depend on how many are run alongside them.
    let single = unravel_trajectory(&gen, &plus(), &cfg, 5).unwrap();
    assert_eq!(single.states, a.conditioned_states[5]);
}

#[test]
fn conditioned_states_keep_unit_trace() {
    let gen = LindbladGenerator::pure_dephasing_qubit(0.8).unwrap();
    let cfg = TrajectoryConfig::new(16, 1e-3, 1.0, 4).unwrap().with_record_stride(100).unwrap();
    let ens = unravel(&gen, &plus(), &cfg).unwrap();
    for tr in &ens.conditioned_states {
        for rho in tr {
            assert!((rho.trace().re - 1.0).abs() < 1e-6);
        }
    }
}
