use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_telegraph");

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const SMALL: &str = r#"
experiment_id = "small"
alpha_values = [1.0, 2.0]
gamma_range = [1e-4, 1.0]
n_fluctuators = 20
n_rate_samples = 3
master_seed = 7

[tau_grid]
tau_max = 3.0
n_points = 31
"#;

fn run(args: &[&str]) -> std::process::Output {
    Command::new(BIN).args(args).output().unwrap()
}

#[test]
fn ensemble_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", SMALL);
    let cfg = cfg.to_str().unwrap();
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    assert!(run(&["ensemble", cfg, "--out-dir", out1.to_str().unwrap(), "--threads", "1"]).status.success());
    assert!(run(&["ensemble", cfg, "--out-dir", out2.to_str().unwrap(), "--threads", "4"]).status.success());
    for file in ["curves.csv", "ensembles.json", "summary.json"] {
        let a = std::fs::read(out1.join(file)).unwrap();
        let b = std::fs::read(out2.join(file)).unwrap();
        assert!(a == b, "{file} differs");
    }
}

#[test]
fn seed_override_changes_the_samples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", SMALL);
    let cfg = cfg.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run(&["ensemble", cfg, "--out-dir", a.to_str().unwrap()]);
    run(&["ensemble", cfg, "--out-dir", b.to_str().unwrap(), "--seed", "8"]);
    let ea = std::fs::read(a.join("ensembles.json")).unwrap();
    let eb = std::fs::read(b.join("ensembles.json")).unwrap();
    assert_ne!(ea, eb);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(b.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["master_seed"], 8);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn rows_satisfy_the_correlation_identities() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", SMALL);
    let out = dir.path().join("o");
    assert!(run(&["sweep", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]).status.success());
    let rows = telegraph::formats::read_curves(&out.join("curves.csv")).unwrap();
    assert_eq!(rows.len(), 2 * 31);
    for r in rows {
        assert!((r.negativity - r.gamma_factor.abs()).abs() <= 1e-12);
        let h = telegraph_core::state::binary_h(r.gamma_factor).unwrap();
        assert!((r.discord - h).abs() <= 1e-12);
    }
}

#[test]
fn initial_time_only_gives_the_bell_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"alpha_values": [1.0, 1.5], "gamma_range": [0.01, 100.0], "n_fluctuators": 10,
            "n_rate_samples": 4, "tau_grid": {"tau_max": 1.0, "n_points": 1}}"#,
    );
    let out = dir.path().join("o");
    assert!(run(&["ensemble", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]).status.success());
    let rows = telegraph::formats::read_curves(&out.join("curves.csv")).unwrap();
    assert_eq!(rows.len(), 8);
    for r in rows {
        assert_eq!((r.tau, r.negativity, r.discord), (0.0, 1.0, 1.0));
    }
}

#[test]
fn degenerate_range_is_rejected_before_any_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &SMALL.replace("[1e-4, 1.0]", "[0.5, 0.5]"));
    let out = dir.path().join("o");
    let res = run(&["verify", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("degenerate"));
    assert!(!out.exists());
}

#[test]
fn missing_config_names_the_file() {
    let res = run(&["ensemble", "/nonexistent/config.toml"]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("/nonexistent/config.toml"));
}

const SMALL_VERIFY: &str = r#"
alpha_values = [1.0]
gamma_range = [1e-4, 1e4]
n_fluctuators = 10
master_seed = 3

[tau_grid]
tau_max = 1.0
n_points = 2

[verify]
dephasing_trajectories = 4000
state_trajectories = 4000
state_grid = { tau_max = 3.0, n_points = 7 }
slope_n_fluctuators = 10000
ks_samples = 20000
ks_threshold = 0.02
"#;

#[test]
fn verify_passes_and_the_slope_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), "good.toml", SMALL_VERIFY);
    let out = dir.path().join("good");
    let res = run(&["verify", good.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stdout));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out.join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);

    let bad = write_config(
        dir.path(),
        "bad.toml",
        &SMALL_VERIFY.replace("ks_threshold = 0.02", "ks_threshold = 0.02\nslope_target = -3.0"),
    );
    let out = dir.path().join("bad");
    let res = run(&["verify", bad.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("spectrum_slope"), "{stderr}");
    assert!(!stderr.contains("dephasing_mc"));
}
