use std::path::PathBuf;
use std::process::{Command, Output};

fn decoh(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_decoh"));
    cmd.args(args).env_remove("DECOH_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name).to_string_lossy().into_owned()
}

#[test]
fn models_lists_seven_entries() {
    let out = decoh(&["models"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let models: Vec<&str> = text.lines().filter(|l| l.starts_with("model\t")).collect();
    assert_eq!(models.len(), 7);
    for line in text.lines() {
        let fields: Vec<&str> = line.split('\t').collect();
        match fields[0] {
            "model" => assert_eq!(fields.len(), 5),
            "param" => assert_eq!(fields.len(), 6),
            other => panic!("unexpected record {other}"),
        }
    }
    assert!(text.contains("model\tqbm\t"));
    assert!(text.contains("param\tcollisional\tlambda\t"));
}

#[test]
fn models_json_matches_the_text_listing() {
    let out = decoh(&["models", "--json"], &[]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = json.as_array().unwrap();
    assert_eq!(arr.len(), 7);
    let total: usize = arr.iter().map(|m| m["params"].as_array().unwrap().len()).sum();
    let text = String::from_utf8(decoh(&["models"], &[]).stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("param\t")).count(), total);
}

#[test]
fn validate_accepts_shipped_scenarios() {
    let out = decoh(&["validate", &scenario("two_packet_collisional.cfg")], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("ok\ttwo_packet_collisional\tcollisional"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    let text = std::fs::read_to_string(scenario("dephasing_qubit.cfg")).unwrap();
    std::fs::write(&bad, text.replace("dim = 2", "dim = 2\nunknown = 1")).unwrap();
    let bad = bad.to_string_lossy().into_owned();
    assert_eq!(decoh(&["validate", &bad], &[]).status.code(), Some(2));
    assert_eq!(decoh(&["run", &bad], &[]).status.code(), Some(2));

    let unstable = dir.path().join("unstable.cfg");
    std::fs::write(&unstable, text.replace("rate = 0.25", "rate = 1000.0")).unwrap();
    let out_dir = dir.path().join("out");
    let out = decoh(&["run", &unstable.to_string_lossy(), "--out", &out_dir.to_string_lossy()], &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("numerical failure"));

    let missing = dir.path().join("missing.cfg");
    assert_eq!(decoh(&["run", &missing.to_string_lossy()], &[]).status.code(), Some(1));

    let ok = decoh(&["run", &scenario("dephasing_qubit.cfg"), "--out", &out_dir.to_string_lossy()], &[("DECOH_THREADS", "0")]);
    assert_eq!(ok.status.code(), Some(2));
}

#[test]
fn run_writes_files_and_honours_seed_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("traj.cfg");
    let text = std::fs::read_to_string(scenario("dephasing_trajectories.cfg")).unwrap();
    std::fs::write(&cfg, text.replace("n_trajectories = 500", "n_trajectories = 32")).unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let out = decoh(&["run", &cfg, "--out", &a.to_string_lossy(), "--seed", "9"], &[("DECOH_THREADS", "2")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    let out = decoh(&["run", &cfg, "--out", &b.to_string_lossy(), "--seed", "9"], &[("DECOH_THREADS", "1")]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["dephasing_trajectories_trajectories.csv", "dephasing_trajectories_summary.json", "dephasing_trajectories_timeseries.csv"] {
        assert_eq!(std::fs::read(a.join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
    let summary: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("dephasing_trajectories_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 9);
}
