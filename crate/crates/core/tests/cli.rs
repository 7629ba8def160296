use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degenerate-fronts"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn manifest(out: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn profile_writes_listed_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["profile", "--alpha", "1", "--beta", "0", "--c", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m = manifest(dir.path());
    assert_eq!(m["command"], "profile");
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["config"]["alpha"], 1.0);
    let files: Vec<&str> = m["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap())
        .collect();
    for f in ["hypotheses.json", "profile.csv", "profile.json"] {
        assert!(files.contains(&f), "{f} missing from {files:?}");
        assert!(dir.path().join(f).exists());
    }
    let csv = std::fs::read_to_string(dir.path().join("profile.csv")).unwrap();
    assert!(csv.starts_with("xi,phi,phi_x"));
}

#[test]
fn below_minimal_speed_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["profile", "--alpha", "1", "--beta", "0", "--c", "0.5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("c < c*"), "{err}");
    assert!(!dir.path().join("manifest.json").exists());
}

#[test]
fn nondegenerate_diffusion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["profile", "--alpha", "0", "--beta", "1", "--c", "1"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("DiffusionIncreasing"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("hypotheses.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["profile", "--nope"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--a", "fast"], dir.path()).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_degenerate-fronts"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let help = String::from_utf8_lossy(&o.stdout);
    for cmd in [
        "profile",
        "cstar",
        "spectrum",
        "borders",
        "weight-plan",
        "energy",
        "tail-audit",
        "reg-sweep",
    ] {
        assert!(help.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn cstar_model_a() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["cstar", "--alpha", "1", "--beta", "0"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cstar.json")).unwrap()).unwrap();
    let c = v["c_star"].as_f64().unwrap();
    assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 5e-3, "{c}");
    assert!(String::from_utf8_lossy(&o.stdout).contains("c* = 0.707"));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"alpha": 1.0, "beta": 0.1, "c": 0.5}"#).unwrap();
    let out = dir.path().join("o");
    let o = run(&["weight-plan", "--config", cfg.to_str().unwrap(), "--c", "0.73"], &out);
    assert!(o.status.success());
    let plan: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("weight_plan.json")).unwrap()).unwrap();
    assert_eq!(plan["c"], 0.73);
    assert_eq!(plan["empty"], true);
}

#[test]
fn weighted_spectrum_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "spectrum",
            "--a",
            "auto",
            "--h",
            "0.1",
            "--jobs",
            "2",
            "--export-matrix",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = manifest(dir.path());
    assert_eq!(s["summary"]["verdict"], "stable");
    assert!((s["summary"]["a"].as_f64().unwrap() - 1.309017).abs() < 1e-5);
    for f in [
        "spectrum.json",
        "eigenvalues.csv",
        "borders.csv",
        "weight_plan.json",
        "operator.mtx",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let mtx = std::fs::read_to_string(dir.path().join("operator.mtx")).unwrap();
    assert!(mtx.starts_with("%%MatrixMarket matrix coordinate real general"));
}

#[test]
fn unweighted_spectrum_is_unstable() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "--a", "0", "--h", "0.1"], dir.path());
    assert!(o.status.success());
    assert_eq!(manifest(dir.path())["summary"]["verdict"], "unstable");
}

#[test]
fn empty_weight_plan_is_unstable_in_all_weights() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "spectrum", "--alpha", "1", "--beta", "0.1", "--c", "0.73", "--a", "auto", "--h", "0.1",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = manifest(dir.path());
    assert_eq!(s["summary"]["verdict"], "unstable-in-all-weights");
    assert_eq!(s["summary"]["weight_plan_empty"], true);
}

#[test]
fn energy_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["energy", "--lambda", "0"], dir.path());
    assert!(o.status.success());
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("energy.json")).unwrap()).unwrap();
    assert!(r["relative_residual"].as_f64().unwrap() <= 1e-6);
    assert!(r["rhs"].as_f64().unwrap() <= 0.0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("relative residual"));
}

#[test]
fn tail_audit_and_borders_and_sweep_run() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t");
    assert!(run(&["tail-audit", "--h", "0.02"], &t).status.success());
    assert!(t.join("tail_audit.json").exists() && t.join("tail_curves.csv").exists());
    let b = dir.path().join("b");
    assert!(
        run(&["borders", "--a", "1.309", "--eps", "0.01", "--k-points", "11"], &b)
            .status
            .success()
    );
    let lines = std::fs::read_to_string(b.join("borders.csv")).unwrap().lines().count();
    assert_eq!(lines, 1 + 2 * 11);
    let s = dir.path().join("s");
    let o = run(
        &[
            "reg-sweep",
            "--eps",
            "1e-1,1e-2,1e-3",
            "--h",
            "0.2",
            "--x-minus",
            "20",
            "--x-plus",
            "15",
        ],
        &s,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(s.join("drift.json").exists() && s.join("drift.csv").exists());
    assert!(manifest(&s)["summary"].get("slope").is_some());
    assert_eq!(
        run(&["reg-sweep", "--eps", "1e-3,1e-2", "--h", "0.2"], &s)
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let args = [
        "spectrum",
        "--a",
        "auto",
        "--h",
        "0.2",
        "--x-minus",
        "20",
        "--x-plus",
        "15",
    ];
    assert!(run(&args, &a).status.success());
    assert!(run(&args, &b).status.success());
    for f in [
        "spectrum.json",
        "eigenvalues.csv",
        "borders.csv",
        "weight_plan.json",
        "hypotheses.json",
    ] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}
