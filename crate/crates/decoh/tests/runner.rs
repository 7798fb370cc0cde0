use std::path::{Path, PathBuf};

use decoh::config::ScenarioConfig;
use decoh::runner::{run_scenario, RunOptions};
use decoh::{load_config, RunError};

fn scenario(name: &str) -> (ScenarioConfig, String) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.cfg"));
    load_config(&path).unwrap()
}

fn opts(dir: &Path) -> RunOptions {
    RunOptions { out_dir: dir.to_path_buf(), seed: None, threads: None }
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect()).collect();
    (header, rows)
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    names.sort();
    names
}

#[test]
fn dephasing_qubit_columns_and_rate() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, stem) = scenario("dephasing_qubit");
    let report = run_scenario(&cfg, &stem, &opts(dir.path())).unwrap();
    assert_eq!(listing(dir.path()), ["dephasing_qubit_summary.json", "dephasing_qubit_timeseries.csv"]);
    let (header, rows) = read_csv(&dir.path().join("dephasing_qubit_timeseries.csv"));
    assert_eq!(header, ["t", "re_rho01", "im_rho01", "purity", "entropy"]);
    assert_eq!(rows.len(), report.summary.records);
    for r in &rows {
        let c = (r[1] * r[1] + r[2] * r[2]).sqrt();
        assert!((c - 0.5 * (-0.5 * r[0]).exp()).abs() < 1e-8);
        assert!((r[3] - (0.5 + 2.0 * c * c)).abs() < 1e-9);
    }
    let fit = report.summary.fit.unwrap();
    assert_eq!(fit.reference_rate, Some(0.5));
    assert!(fit.relative_error.unwrap() < 0.01);
    assert!((fit.rate - 0.5).abs() / 0.5 < 0.01);

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("dephasing_qubit_summary.json")).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert!(json["fit"]["residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn empty_outputs_write_only_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (mut cfg, stem) = scenario("dephasing_qubit");
    cfg.outputs.clear();
    cfg.fit = None;
    let report = run_scenario(&cfg, &stem, &opts(dir.path())).unwrap();
    assert_eq!(listing(dir.path()), ["dephasing_qubit_summary.json"]);
    assert_eq!(report.summary.files, ["dephasing_qubit_summary.json"]);
    assert!(report.summary.fit.is_none());
}

fn small_trajectories() -> (ScenarioConfig, String) {
    let (mut cfg, stem) = scenario("dephasing_trajectories");
    cfg.trajectories.as_mut().unwrap().n_trajectories = 64;
    (cfg, stem)
}

fn run_bytes(cfg: &ScenarioConfig, stem: &str, seed: Option<u64>, threads: Option<usize>) -> Vec<(String, Vec<u8>)> {
    let dir = tempfile::tempdir().unwrap();
    run_scenario(cfg, stem, &RunOptions { out_dir: dir.path().to_path_buf(), seed, threads }).unwrap();
    listing(dir.path()).into_iter().map(|n| (n.clone(), std::fs::read(dir.path().join(&n)).unwrap())).collect()
}

#[test]
fn fixed_seed_runs_are_byte_identical_across_thread_counts() {
    let (cfg, stem) = small_trajectories();
    let a = run_bytes(&cfg, &stem, None, Some(1));
    let b = run_bytes(&cfg, &stem, None, Some(3));
    let c = run_bytes(&cfg, &stem, None, None);
    assert_eq!(a.len(), 3);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn seed_override_changes_the_ensemble() {
    let (cfg, stem) = small_trajectories();
    let a = run_bytes(&cfg, &stem, None, Some(2));
    let b = run_bytes(&cfg, &stem, Some(cfg.seed + 1), Some(2));
    let traj = |v: &[(String, Vec<u8>)]| v.iter().find(|(n, _)| n.ends_with("_trajectories.csv")).unwrap().1.clone();
    assert_ne!(traj(&a), traj(&b));
    let summary = &b.iter().find(|(n, _)| n.ends_with("_summary.json")).unwrap().1;
    let json: serde_json::Value = serde_json::from_slice(summary).unwrap();
    assert_eq!(json["seed"], cfg.seed + 1);
}

#[test]
fn trajectory_export_matches_its_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, stem) = scenario("dephasing_trajectories");
    let report = run_scenario(&cfg, &stem, &opts(dir.path())).unwrap();
    let tr = report.summary.trajectories.unwrap();
    assert_eq!(tr.n_trajectories, 500);
    let (header, rows) = read_csv(&dir.path().join("dephasing_trajectories_trajectories.csv"));
    assert_eq!(header, ["trajectory_id", "t", "sigma_x", "sigma_y", "sigma_z"]);
    assert_eq!(rows.len(), 500 * tr.times.len());
    let sx = &tr.observables[0];
    for (k, _) in tr.times.iter().enumerate() {
        let mean: f64 = rows.iter().skip(k).step_by(tr.times.len()).map(|r| r[2]).sum::<f64>() / 500.0;
        assert!((mean - sx.mean[k]).abs() < 1e-12);
    }
    for o in &tr.observables {
        assert!(o.max_deviation_in_stderr < 4.0, "{} {}", o.label, o.max_deviation_in_stderr);
    }
}

#[test]
fn collisional_wigner_ridge_fades() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, stem) = scenario("two_packet_collisional");
    let report = run_scenario(&cfg, &stem, &opts(dir.path())).unwrap();
    let ridges: Vec<f64> = report.summary.wigner.iter().map(|w| w.ridge_amplitude.unwrap()).collect();
    assert_eq!(ridges.len(), 4);
    assert!(ridges.windows(2).all(|w| w[1] < 0.8 * w[0]), "{ridges:?}");
    assert!(ridges[3] < 0.3 * ridges[0]);
    for w in &report.summary.wigner {
        assert!((w.normalization - 1.0).abs() < 1e-4);
        assert!(w.marginal_mismatch < 1e-4);
        assert!((w.time - w.requested_time).abs() < 1e-12);
    }
    let (header, rows) = read_csv(&dir.path().join("two_packet_collisional_wigner.csv"));
    assert_eq!(header, ["t", "x", "p", "w"]);
    assert_eq!(rows.len(), 4 * 128 * 128);
    let (header, rows) = read_csv(&dir.path().join("two_packet_collisional_position_density.csv"));
    assert_eq!(header, ["t", "x", "density"]);
    assert_eq!(rows.len(), report.summary.records * 128);
    let dx = 12.0 / 127.0;
    let total: f64 = rows.iter().take(128).map(|r| r[2]).sum::<f64>() * dx;
    assert!((total - 1.0).abs() < 1e-9, "{total}");
}

#[test]
fn spin_spin_mutual_information_is_bounded() {
    let text = decoh::catalog::list_models().iter().find(|m| m.name == "spin_spin").unwrap().examples[1];
    let cfg = ScenarioConfig::parse(text).unwrap();
    let dir = tempfile::tempdir().unwrap();
    run_scenario(&cfg, "mi", &opts(dir.path())).unwrap();
    let (header, rows) = read_csv(&dir.path().join("mi_timeseries.csv"));
    assert_eq!(header, ["t", "re_rho01", "im_rho01", "purity", "mutual_information"]);
    assert_eq!(rows[0][4].abs() < 1e-9, true);
    assert!(rows.iter().all(|r| r[4] > -1e-9 && r[4] < 2.0 + 1e-9));
    assert!(rows.iter().any(|r| r[4] > 0.1));
}

#[test]
fn every_shipped_scenario_runs() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|x| x == "cfg") {
            let out = tempfile::tempdir().unwrap();
            decoh::run_file(&path, &opts(out.path())).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        }
    }
}

#[test]
fn unstable_step_is_a_numerical_failure() {
    let (mut cfg, stem) = scenario("dephasing_qubit");
    if let decoh::config::ModelParams::CustomLindblad(c) = &mut cfg.model {
        c.lindblad[0].rate = 1000.0;
    }
    let dir = tempfile::tempdir().unwrap();
    let err = run_scenario(&cfg, &stem, &opts(dir.path())).unwrap_err();
    assert!(matches!(err, RunError::Numerical(_)), "{err}");
    assert_eq!(err.exit_code(), 3);
}
