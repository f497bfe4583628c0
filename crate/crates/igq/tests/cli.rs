use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn igq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igq"))
        .args(args)
        .env_remove(igq::config::CONFIG_ENV)
        .output()
        .expect("spawn igq")
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn lines(bytes: &[u8]) -> Vec<Value> {
    std::str::from_utf8(bytes).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_writes_report_and_summary() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.jsonl");
    let run = igq(&["verify", "metric", "--n", "2..3", "--trials", "20", "--out", out.to_str().unwrap()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(run.stdout.is_empty());
    let report = lines(&std::fs::read(&out).unwrap());
    let (summary, checks) = report.split_last().unwrap();
    assert_eq!(summary["summary"], true);
    assert_eq!(summary["status"], "pass");
    assert_eq!(summary["checks"], checks.len());
    for c in checks {
        assert!(c["check"].as_str().unwrap().starts_with("metric."));
        assert_eq!(c["status"], "pass");
        assert!(c["max_residual"].as_f64().unwrap() < c["tolerance"].as_f64().unwrap());
    }
}

#[test]
fn tolerance_override_can_fail_a_check() {
    let run = igq(&["verify", "metric", "--trials", "5", "--tol", "metric.qspace_euclidean=1e-300"]);
    assert_eq!(run.status.code(), Some(1));
    let report = lines(&run.stdout);
    let check = report.iter().find(|c| c["check"] == "metric.qspace_euclidean").unwrap();
    assert_eq!(check["status"], "fail");
    assert_eq!(check["tolerance"], 1e-300);
    assert_eq!(report.last().unwrap()["status"], "fail");
}

#[test]
fn config_file_from_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "cfg.json", &json!({"seed": 7, "dimensions": [2], "trials": {"metric": 3}}));
    let run = Command::new(env!("CARGO_BIN_EXE_igq"))
        .args(["verify", "metric"])
        .env(igq::config::CONFIG_ENV, &cfg)
        .output()
        .unwrap();
    assert!(run.status.success());
    let report = lines(&run.stdout);
    assert_eq!(report.last().unwrap()["seed"], 7);
    let euclid = report.iter().find(|c| c["check"] == "metric.qspace_euclidean").unwrap();
    assert_eq!(euclid["trials"], 3);
}

#[test]
fn invalid_config_is_rejected() {
    let dir = TempDir::new().unwrap();
    for (name, body) in [
        ("unknown.json", json!({"seeds": 1})),
        ("negative.json", json!({"tolerances": {"metric.complex_flat": -1.0}})),
        ("empty_dims.json", json!({"dimensions": []})),
    ] {
        let cfg = write(dir.path(), name, &body);
        let run = igq(&["verify", "metric", "--config", &cfg]);
        assert_eq!(run.status.code(), Some(2), "{name}");
        assert!(run.stdout.is_empty(), "{name}");
    }
    let missing = igq(&["verify", "metric", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!igq(&["verify", "nonsense"]).status.success());
    assert!(!igq(&["verify", "metric", "--n", "5..2"]).status.success());
    assert!(!igq(&["verify", "metric", "--tol", "no-equals-sign"]).status.success());
}

#[test]
fn same_seed_same_report() {
    let args = ["verify", "compose", "--trials", "50", "--seed", "11"];
    let strip = |o: Output| -> Vec<Value> {
        std::str::from_utf8(&o.stdout).unwrap().lines().map(|l| igq::report::without_elapsed(l).unwrap()).collect()
    };
    assert_eq!(strip(igq(&args)), strip(igq(&args)));
}

#[test]
fn classify_rotation_and_generic_matrices() {
    let dir = TempDir::new().unwrap();
    // Complex form (i) realifies to the quarter-turn block.
    let rot = write(dir.path(), "rot.json", &json!([[0.0, -1.0], [1.0, 0.0]]));
    let run = igq(&["classify", &rot]);
    assert!(run.status.success());
    let out = &lines(&run.stdout)[0];
    assert_eq!(out["kind"], "unitary");
    let z = out["matrix"][0][0].as_array().unwrap();
    assert!(z[0].as_f64().unwrap().abs() < 1e-12 && (z[1].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let flip = write(dir.path(), "flip.json", &json!([[1.0, 0.0], [0.0, -1.0]]));
    assert_eq!(lines(&igq(&["classify", &flip]).stdout)[0]["kind"], "antiunitary");

    // Rotates only the real parts of two results: breaks gauge invariance.
    let (c, s) = (0.6, 0.8);
    let mixed = json!([[c, 0.0, -s, 0.0], [0.0, 1.0, 0.0, 0.0], [s, 0.0, c, 0.0], [0.0, 0.0, 0.0, 1.0]]);
    let run = igq(&["classify", &write(dir.path(), "mixed.json", &mixed)]);
    assert_eq!(run.status.code(), Some(1));
    assert_eq!(lines(&run.stdout)[0]["kind"], "not_gauge_invariant");

    let bad = write(dir.path(), "bad.json", &json!([[1.0, 1.0], [0.0, 1.0]]));
    assert_eq!(igq(&["classify", &bad]).status.code(), Some(2));
}

#[test]
fn tensor_product_of_states() {
    let dir = TempDir::new().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a = write(dir.path(), "a.json", &json!([[h, 0.0], [0.0, h]]));
    let b = write(dir.path(), "b.json", &json!([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]));
    let out = &lines(&igq(&["tensor", &a, &b]).stdout)[0];
    assert_eq!(out["N"], 2);
    assert_eq!(out["N'"], 3);
    let state = out["state"].as_array().unwrap();
    assert_eq!(state.len(), 6);
    // Index N'·i + j with i = 1, j = 1 carries i/√2.
    assert!((state[4][1].as_f64().unwrap() - h).abs() < 1e-15);
    assert!((state[1][0].as_f64().unwrap() - h).abs() < 1e-15);
}

#[test]
fn measurement_log_is_seeded_and_collapses() {
    let dir = TempDir::new().unwrap();
    let obs = write(
        dir.path(),
        "obs.json",
        &json!({"values": [-1.0, 1.0], "basis": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}),
    );
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let state = write(dir.path(), "state.json", &json!([[h, 0.0], [0.0, h]]));
    let args = ["measure", "--observable", &obs, "--state", &state, "--trials", "200", "--seed", "3"];
    let first = igq(&args);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, igq(&args).stdout);
    let log = lines(&first.stdout);
    assert_eq!(log.len(), 200);
    let mut seen = [0; 2];
    for (t, entry) in log.iter().enumerate() {
        assert_eq!(entry["trial"], t);
        let r = entry["result"].as_u64().unwrap() as usize;
        seen[r] += 1;
        // The output state is the basis vector of the result, up to phase.
        let out = entry["output_state"].as_array().unwrap();
        let weight = |k: usize| out[k][0].as_f64().unwrap().powi(2) + out[k][1].as_f64().unwrap().powi(2);
        assert!((weight(r) - 1.0).abs() < 1e-12);
    }
    assert!(seen[0] > 50 && seen[1] > 50, "{seen:?}");
}

#[test]
fn hj_residual_of_plane_wave_is_small() {
    let dir = TempDir::new().unwrap();
    let (h, dt, m, p) = (0.1, 0.01, 1.0, 0.7);
    let state = |t: f64| {
        let xs: Vec<f64> = (0..40).map(|i| -2.0 + h * i as f64).collect();
        json!({
            "h": h,
            "x0": -2.0,
            "P": vec![1.0 / 40.0; 40],
            "S": xs.iter().map(|x| p * x - p * p / (2.0 * m) * t).collect::<Vec<_>>(),
            "m": m,
        })
    };
    let paths = [state(-dt), state(0.0), state(dt)]
        .iter()
        .enumerate()
        .map(|(i, s)| write(dir.path(), &format!("s{i}.json"), s))
        .collect::<Vec<_>>();
    let run = igq(&["hj-residual", &paths[0], &paths[1], &paths[2], "--dt", &dt.to_string()]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let out = &lines(&run.stdout)[0];
    assert!(out["continuity"].as_f64().unwrap() < 1e-9);
    assert!(out["hamilton_jacobi"].as_f64().unwrap() < 1e-9);
}
