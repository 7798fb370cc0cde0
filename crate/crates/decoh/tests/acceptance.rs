//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with
//! `cargo test --release -p decoh --test acceptance`.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DVector;

use decoh::parallel::unravel_parallel;
use decoh_core::channels::{apply_channel, check_complete_positivity, kraus_from_unitary, LinearMap};
use decoh_core::fit::{fit_decay, fit_decay_in_window, DecayLaw};
use decoh_core::grid::Grid1D;
use decoh_core::lindblad::{coherence_decay_rate, evolve, IntegratorConfig, LindbladGenerator};
use decoh_core::linalg::{pauli, partial_trace, qubit_operator, Subsystem};
use decoh_core::models::{
    cat_decoherence_time, cat_overlap, collisional_generator, decoherence_dissipation_ratio, spin_spin_coherence_factor,
    CavityCatParams, CollisionalParams, QbmParams, SpinSpinParams,
};
use decoh_core::protection::{apply_phase_error, apply_phase_errors, correct_three_bit, encode_three_bit, find_dfs};
use decoh_core::random::{haar_unitary, random_density_matrix, random_state, stream_rng, uniform};
use decoh_core::trajectories::{ensemble_statistics, TrajectoryConfig};
use decoh_core::wigner::{check_marginals, wigner};
use decoh_core::{DensityMatrix, Operator, StateVector, C64};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: decoh_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ratio_estimate() -> Outcome {
    let r = core(decoherence_dissipation_ratio(1e-3, 300.0, 1e-2))?;
    ensure((1e39..=1e41).contains(&r), || format!("ratio {r:e} outside [1e39, 1e41]"))?;
    Ok(format!("ratio {r:.3e}"))
}

fn cavity_cat() -> Outcome {
    let big = core(CavityCatParams::new(10.0, 0.31 * PI, 1.0))?;
    let overlap = core(cat_overlap(&big))?.amplitude;
    ensure(overlap < 3e-5, || format!("overlap {overlap:e} not below 3e-5"))?;
    let lab = core(CavityCatParams::new(3.5, 0.37 * PI, 0.13))?;
    let td = core(cat_decoherence_time(&lab))?;
    ensure((0.020..=0.024).contains(&td), || format!("T_d = {:.2} ms outside [20, 24] ms", td * 1e3))?;
    Ok(format!("overlap {overlap:.2e}, T_d {:.2} ms", td * 1e3))
}

fn collective_z(n: usize) -> Operator {
    (0..n).fold(Operator::zeros(1 << n), |acc, q| &acc + &qubit_operator(&pauli::z(), q, n))
}

fn dfs_dimensions() -> Outcome {
    let r4 = core(find_dfs(&[collective_z(4)]))?;
    ensure(r4.dimension() == 6, || format!("N=4 dimension {}", r4.dimension()))?;
    let mut found = BTreeSet::new();
    for v in r4.basis() {
        let amps = v.amplitudes();
        let k = (0..amps.len()).max_by(|&a, &b| amps[a].norm().total_cmp(&amps[b].norm())).unwrap();
        ensure((amps[k].norm() - 1.0).abs() < 1e-10, || "N=4 basis vector is not a computational state".into())?;
        found.insert(k);
    }
    let expected: BTreeSet<usize> = (0..16usize).filter(|k| k.count_ones() == 2).collect();
    ensure(found == expected, || format!("N=4 basis states {found:?}"))?;
    let mut dims = Vec::new();
    for (n, want) in [(2usize, 2usize), (6, 20), (8, 70)] {
        let start = Instant::now();
        let d = core(find_dfs(&[collective_z(n)]))?.dimension();
        ensure(d == want, || format!("N={n} dimension {d}, expected {want}"))?;
        if n == 8 {
            let el = start.elapsed();
            ensure(el < Duration::from_secs(5), || format!("N=8 took {el:?}"))?;
        }
        dims.push(d);
    }
    Ok(format!("N=4 -> 6 weight-2 states, N=2,6,8 -> {dims:?}"))
}

fn collisional_law() -> Outcome {
    let n = 256;
    let lambda = 0.3;
    let grid = core(Grid1D::centered(n, 6.0))?;
    let p = core(CollisionalParams::long_wavelength(lambda, 1.0))?.with_free_dynamics(false);
    let gen = core(collisional_generator(&p, &grid))?;
    let rho0 = DensityMatrix::pure(&core(grid.gaussian_packet(0.0, 3.0, 0.0))?);
    let t = 0.1;
    let cfg = core(IntegratorConfig::new(1e-3, t))?;
    let rho = core(evolve(&gen, &rho0, &cfg))?.final_state().clone();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let ratio = rho.get(i, j).re / rho0.get(i, j).re;
            let law = (-lambda * (grid.x(i) - grid.x(j)).powi(2) * t).exp();
            worst = worst.max((ratio - law).abs());
        }
    }
    ensure(worst < 1e-6, || format!("H=0 deviation {worst:e}"))?;

    let lambda = 1.0;
    let (x0, sigma) = (3.0, 0.75);
    let grid = core(Grid1D::centered(n, 8.0))?;
    let p = core(CollisionalParams::long_wavelength(lambda, 4.0))?;
    let gen = core(collisional_generator(&p, &grid))?;
    let rho0 = DensityMatrix::pure(&core(grid.two_packet_superposition(x0, sigma))?);
    let separation = 2.0 * x0;
    let t = 5.0 / (lambda * separation * separation);
    let cfg = core(IntegratorConfig::new(2.5e-3, t))?;
    let rho = core(evolve(&gen, &rho0, &cfg))?.final_state().clone();
    let (a, b) = (grid.nearest_index(-x0), grid.nearest_index(x0));
    let diag = rho.get(a, a).norm().min(rho.get(b, b).norm());
    let diag0 = rho0.get(a, a).norm();
    let off = rho.get(a, b).norm();
    let peak_ratio = off / diag;
    ensure(diag > 0.5 * diag0, || format!("diagonal peak fell to {:.3} of its start", diag / diag0))?;
    ensure(peak_ratio < 0.05, || format!("off/diag peak ratio {peak_ratio:.4}"))?;
    Ok(format!("H=0 max deviation {worst:.1e}; free cat off/diag {peak_ratio:.4} at t={t:.4}"))
}

fn dephasing_qubit() -> Outcome {
    let d = 0.35;
    let gen = core(LindbladGenerator::pure_dephasing_qubit(d))?;
    let literal = core(coherence_decay_rate(&gen, 0, 1))?;
    ensure((literal / d - 4.0).abs() < 1e-12, || format!("literal rate / D = {}", literal / d))?;
    let psi = core(StateVector::from_amplitudes(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]))?;
    let rho0 = DensityMatrix::pure(&psi);
    let cfg = core(core(IntegratorConfig::new(1e-3, 3.0))?.with_record_stride(10))?;
    let series = core(evolve(&gen, &rho0, &cfg))?;
    let c: Vec<f64> = series.element(0, 1).iter().map(|z| z.norm() / rho0.get(0, 1).norm()).collect();
    let fit = core(fit_decay(&series.times, &c, DecayLaw::Exponential))?;
    let rel = (fit.rate / literal - 1.0).abs();
    ensure(rel < 0.01, || format!("fitted {:.5} vs literal {literal:.5}", fit.rate))?;
    let drift = series
        .states
        .iter()
        .map(|r| (r.get(0, 0) - rho0.get(0, 0)).norm().max((r.get(1, 1) - rho0.get(1, 1)).norm()))
        .fold(0.0, f64::max);
    ensure(drift < 1e-8, || format!("population drift {drift:e}"))?;
    Ok(format!("fit {:.6} vs 4D {literal:.6} (stated D {d}), population drift {drift:.1e}", fit.rate))
}

fn caldeira_leggett_limit() -> Outcome {
    let (omega, cutoff, temperature) = (1e-3, 1.0, 1e3);
    let q = core(QbmParams::new(1.0, omega, 0.05, temperature, cutoff))?;
    let d = core(q.coefficients())?.d;
    let cl = q.caldeira_leggett_d();
    let rel = (d / cl - 1.0).abs();
    ensure(rel < 0.02, || format!("D = {d:.6} vs 2Mγ₀T = {cl:.6}"))?;
    Ok(format!("D/2Mγ₀T = {:.5}", d / cl))
}

/// `e^{−iHt}ψ` by Taylor steps on the dense matrix.
fn propagate(h: &Operator, psi: &DVector<C64>, t: f64) -> DVector<C64> {
    let m = h.matrix();
    let bound = m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let steps = (bound * t / 2.0).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut v = psi.clone();
    for _ in 0..steps {
        let mut term = v.clone();
        for k in 1..=40 {
            term = m * &term * C64::new(0.0, -dt / k as f64);
            v += &term;
        }
    }
    v
}

fn spin_spin_decay() -> Outcome {
    let mut rng = stream_rng(128, 0);
    let couplings: Vec<f64> = (0..128).map(|_| uniform(&mut rng)).collect();
    let p = core(SpinSpinParams::all_plus(couplings))?;
    let times: Vec<f64> = (0..=2000).map(|k| k as f64 * 5e-4).collect();
    let z = times.iter().map(|&t| spin_spin_coherence_factor(&p, t).map(|z| z.norm())).collect::<decoh_core::Result<Vec<_>>>();
    let z = core(z)?;
    let fit = core(fit_decay_in_window(&times, &z, DecayLaw::Gaussian, (0.1, 0.9)))?;
    ensure(fit.r_squared > 0.95, || format!("R² = {}", fit.r_squared))?;

    let mut worst = 0.0f64;
    for n in 1..=10usize {
        let mut rng = stream_rng(7, n as u64);
        let couplings: Vec<f64> = (0..n).map(|_| 2.0 * uniform(&mut rng) - 1.0).collect();
        let env: Vec<(C64, C64)> = (0..n)
            .map(|_| {
                let s = random_state(&mut rng, 2);
                (s.amplitudes()[0], s.amplitudes()[1])
            })
            .collect();
        let p = core(SpinSpinParams::new(couplings, env, 0.0))?;
        let (a, b) = (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2));
        let psi0 = core(p.initial_state(a, b))?;
        let h = p.hamiltonian();
        let de = 1 << n;
        for t in [0.3, 1.1, 2.7] {
            let psi = propagate(&h, psi0.amplitudes(), t);
            let rho01: C64 = (0..de).map(|e| psi[e] * psi[de + e].conj()).sum();
            let brute = rho01 / (a * b.conj());
            let product = core(spin_spin_coherence_factor(&p, t))?;
            worst = worst.max((brute - product).norm());
        }
    }
    ensure(worst < 1e-10, || format!("product vs brute force {worst:e}"))?;
    Ok(format!("R² {:.4} over {} points, brute-force max deviation {worst:.1e}", fit.r_squared, fit.points))
}

fn ensemble_error(gen: &LindbladGenerator, rho0: &DensityMatrix, n: usize, seed: u64, exact: &[f64]) -> Result<(f64, Vec<(f64, f64)>), String> {
    let cfg = core(core(TrajectoryConfig::new(n, 5e-3, 2.0, seed))?.with_record_stride(10))?;
    let ens = unravel_parallel(gen, rho0, &cfg, None).map_err(|e| e.to_string())?;
    let stats = core(ensemble_statistics(&ens, &pauli::x()))?;
    let pairs: Vec<(f64, f64)> = stats.mean.iter().zip(&stats.stderr).map(|(&m, &s)| (m, s)).collect();
    let mse = pairs.iter().zip(exact).map(|((m, _), e)| (m - e).powi(2)).sum::<f64>() / exact.len() as f64;
    Ok((mse, pairs))
}

fn trajectory_convergence() -> Outcome {
    let gen = core(LindbladGenerator::pure_dephasing_qubit(0.25))?;
    let plus = core(StateVector::from_amplitudes(&[C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)]))?;
    let rho0 = DensityMatrix::pure(&plus);
    let cfg = core(core(TrajectoryConfig::new(2, 5e-3, 2.0, 0))?.with_record_stride(10))?;
    let exact: Vec<f64> = core(evolve(&gen, &rho0, &cfg.integrator()))?
        .states
        .iter()
        .map(|r| r.expectation(&pauli::x()))
        .collect::<decoh_core::Result<_>>()
        .map_err(|e| e.to_string())?;

    let (_, pairs) = ensemble_error(&gen, &rho0, 2000, 42, &exact)?;
    let mut worst = 0.0f64;
    for ((m, s), e) in pairs.iter().zip(&exact) {
        let z = if *s > 0.0 { (m - e).abs() / s } else if (m - e).abs() < 1e-12 { 0.0 } else { f64::INFINITY };
        worst = worst.max(z);
    }
    ensure(worst < 3.0, || format!("deviation reaches {worst:.2} standard errors"))?;

    let mean_mse = |n: usize, reps: u64| -> Result<f64, String> {
        let mut total = 0.0;
        for r in 0..reps {
            total += ensemble_error(&gen, &rho0, n, 1000 + r, &exact)?.0;
        }
        Ok(total / reps as f64)
    };
    let small = mean_mse(500, 8)?.sqrt();
    let large = mean_mse(2000, 8)?.sqrt();
    let halving = small / large;
    ensure((1.0..=4.0).contains(&halving), || format!("RMS ratio {halving:.3} for 4x trajectories"))?;
    Ok(format!("max {worst:.2} SE, RMS 500 -> 2000 ratio {halving:.2}"))
}

fn channel_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let mut rng = stream_rng(9, k);
        let u = haar_unitary(&mut rng, 4);
        let rho_s = random_density_matrix(&mut rng, 2);
        let rho_e = random_density_matrix(&mut rng, 2);
        let ch = core(kraus_from_unitary(&u, &rho_e, (2, 2)))?;
        let via_kraus = core(apply_channel(&ch, &rho_s))?;
        let full = core(rho_s.tensor(&rho_e).conjugate(&u))?;
        let direct = core(partial_trace(&full, (2, 2), Subsystem::A))?;
        worst = worst.max(via_kraus.max_abs_diff(&direct));
    }
    ensure(worst < 1e-10, || format!("max deviation {worst:e}"))?;
    let report = check_complete_positivity(&LinearMap::transpose(2));
    ensure(!report.cp, || "transposition map reported as completely positive".into())?;
    Ok(format!("max deviation {worst:.1e}, transpose min Choi eigenvalue {:.3}", report.min_choi_eigenvalue))
}

fn three_bit_code() -> Outcome {
    let mut rng = stream_rng(3, 0);
    let mut worst = 0.0f64;
    let mut flagged = 0;
    for _ in 0..50 {
        let logical = random_state(&mut rng, 2);
        let cs = core(encode_three_bit(logical.amplitudes()[0], logical.amplitudes()[1]))?;
        for qubit in [None, Some(1), Some(2), Some(3)] {
            let fix = core(correct_three_bit(&core(apply_phase_error(&cs, qubit))?))?;
            ensure(!fix.unrecoverable, || format!("single error {qubit:?} flagged unrecoverable"))?;
            worst = worst.max((fix.fidelity - 1.0).abs());
        }
        for pair in [[1usize, 2], [1, 3], [2, 3]] {
            let fix = core(correct_three_bit(&core(apply_phase_errors(&cs, &pair))?))?;
            ensure(fix.unrecoverable, || format!("double error {pair:?} not flagged"))?;
            flagged += 1;
        }
    }
    ensure(worst < 1e-10, || format!("fidelity deficit {worst:e}"))?;
    Ok(format!("fidelity deficit {worst:.1e}, {flagged}/150 double errors flagged"))
}

fn wigner_properties() -> Outcome {
    let grid = core(Grid1D::centered(128, 8.0))?;
    let x0 = 2.5;
    let rho = DensityMatrix::pure(&core(grid.two_packet_superposition(x0, 0.7))?);
    let field = core(wigner(&rho, &grid))?;
    let check = core(check_marginals(&field, &rho))?;
    ensure(check.max() < 1e-4, || format!("{check:?}"))?;
    let lambda = core(field.ridge_wavelength(0.0))?;
    let expected = 2.0 * PI / (2.0 * x0);
    let rel = (lambda / expected - 1.0).abs();
    ensure(rel < 0.05, || format!("ridge wavelength {lambda:.4} vs {expected:.4}"))?;
    Ok(format!("marginal error {:.1e}, ridge wavelength {lambda:.4} vs {expected:.4}", check.max()))
}

struct Criterion {
    label: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    let criteria = [
        Criterion { label: "decoherence/dissipation ratio", budget: ms(1), run: ratio_estimate },
        Criterion { label: "cavity cat arithmetic", budget: ms(1), run: cavity_cat },
        Criterion { label: "decoherence-free subspace dimensions", budget: s(5), run: dfs_dimensions },
        Criterion { label: "collisional long-wavelength law", budget: s(30), run: collisional_law },
        Criterion { label: "pure-dephasing qubit", budget: s(1), run: dephasing_qubit },
        Criterion { label: "Caldeira-Leggett limit", budget: s(10), run: caldeira_leggett_limit },
        Criterion { label: "spin-spin Gaussian decay", budget: s(60), run: spin_spin_decay },
        Criterion { label: "trajectory convergence", budget: s(120), run: trajectory_convergence },
        Criterion { label: "channel oracle equivalence", budget: s(10), run: channel_equivalence },
        Criterion { label: "three-bit code", budget: s(5), run: three_bit_code },
        Criterion { label: "Wigner properties", budget: s(30), run: wigner_properties },
    ];
    let mut failures = 0;
    for (k, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|m| {
            if elapsed <= c.budget {
                Ok(m)
            } else {
                Err(format!("{m}; took {elapsed:?}, budget {:?}", c.budget))
            }
        });
        match outcome {
            Ok(m) => println!("PASS {:>2} {} ({elapsed:.2?}): {m}", k + 1, c.label),
            Err(m) => {
                failures += 1;
                println!("FAIL {:>2} {} ({elapsed:.2?}): {m}", k + 1, c.label);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
