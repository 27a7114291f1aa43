use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const HEADER: &str = "t,f,pair,delta_a,delta_b,product,bound,residual,xi_estimate";

fn nhfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhfock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn out_path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn default_verify_passes() {
    let dir = TempDir::new().unwrap();
    let out = out_path(&dir, "v.json");
    let o = nhfock(&["verify", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read_json(Path::new(&out));
    assert_eq!(rep["pass"], true);
    let checks = rep["checks"].as_array().unwrap();
    assert!(checks.len() > 40);
    for c in checks {
        assert!(c["id"].is_string() && c["tolerance"].is_f64());
        assert_eq!(c["pass"], true);
    }
    assert_eq!(rep["summary"]["failed"], 0);
}

#[test]
fn squeeze_cap_is_a_skip_not_a_failure() {
    let dir = TempDir::new().unwrap();
    let out = out_path(&dir, "v.json");
    let o = nhfock(&["verify", "--n-levels", "8", "--kappa", "0.2", "--out", &out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read_json(Path::new(&out));
    let skipped: Vec<&Value> = rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["skipped"].is_string())
        .collect();
    assert!(skipped
        .iter()
        .any(|c| c["id"] == "conj.two_mode_squeeze" && c["skipped"].as_str().unwrap().starts_with("SqueezeTooLarge")));
    assert!(skipped.iter().all(|c| c["max_deviation"].is_null()));
}

#[test]
fn flipped_epsilon_fails_the_position_check() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "flip.json", r#"{"test_hooks": {"flip_epsilon": true}, "t_grid": {"steps": 1}}"#);
    let out = out_path(&dir, "v.json");
    let o = nhfock(&["verify", "--config", &cfg, "--out", &out]);
    assert_eq!(code(&o), 1);
    let rep = read_json(Path::new(&out));
    let xx = rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "algebra.x1x2")
        .unwrap()
        .clone();
    assert_eq!(xx["pass"], false);
    // [x̄₁, x̄₂] = −i f instead of i f, so the deviation is 2f
    assert!((xx["max_deviation"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&nhfock(&["verify", "--bogus"])), 2);
    assert_eq!(code(&nhfock(&["frobnicate"])), 2);
    assert_eq!(code(&nhfock(&["verify", "--config", "/nonexistent/cfg.json"])), 2);
    let bad = write(&dir, "bad.json", r#"{"unknown_field": 1}"#);
    assert_eq!(code(&nhfock(&["sweep", "--config", &bad])), 2);
    assert_eq!(code(&nhfock(&["sweep", "--steps", "0"])), 2);
    assert_eq!(code(&nhfock(&["sweep", "--t-start", "2", "--t-stop", "1"])), 2);
    assert_eq!(code(&nhfock(&["state", "--format", "csv"])), 2);
    assert_eq!(code(&nhfock(&["state", "--kappa", "-1"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_nhfock"))
        .args(["verify", "--steps", "1"])
        .env("NHFOCK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert_eq!(code(&nhfock(&["--help"])), 0);
}

#[test]
fn sweep_header_is_frozen() {
    let o = nhfock(&["sweep", "--steps", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), HEADER);
    assert_eq!(lines.count(), 6);
}

#[test]
fn sweep_marks_the_zero_locus() {
    let dir = TempDir::new().unwrap();
    let out = out_path(&dir, "s.csv");
    let o = nhfock(&[
        "sweep", "--kind", "K1", "--branch", "NHminus", "--tau", "1", "--t-start", "0", "--t-stop", "3", "--steps",
        "31", "--out", &out,
    ]);
    assert_eq!(code(&o), 0);
    let mut rd = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>().join(","), HEADER);
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    let ts: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[0] <= w[1]));
    let near = |r: &csv::StringRecord| (r[0].parse::<f64>().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 0.15;
    let near_rows: Vec<_> = rows.iter().filter(|r| near(r)).collect();
    assert!(!near_rows.is_empty());
    for r in near_rows {
        assert_eq!(&r[2], "*");
        assert!(r[3].starts_with("skipped:"));
    }
    // t = 0 is far from the zero locus and fully reported
    assert_eq!(rows.iter().filter(|r| r[0].parse::<f64>().unwrap() == 0.0).count(), 3);
}

#[test]
fn flat_sweep_saturates_the_position_pair() {
    let o = nhfock(&["sweep", "--steps", "4", "--z-re", "0.1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut n = 0;
    for r in rd.records().map(Result::unwrap).filter(|r| &r[2] == "x1x2") {
        let bound: f64 = r[6].parse().unwrap();
        let residual: f64 = r[7].parse().unwrap();
        assert!(residual.abs() <= 1e-6 * bound, "{residual}");
        n += 1;
    }
    assert_eq!(n, 4);
}

#[test]
fn fully_guarded_grid_exits_two() {
    let o = nhfock(&["sweep", "--kind", "K2", "--steps", "1", "--t-start", "0", "--t-stop", "0"]);
    assert_eq!(code(&o), 2);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], HEADER);
    assert!(lines[1].contains("skipped:DeformationVanishes"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("f_min"));
}

#[test]
fn state_dumps() {
    let o = nhfock(&["state", "--kappa", "2", "--n-levels", "8"]);
    assert_eq!(code(&o), 0);
    let dump: Value = serde_json::from_slice(&o.stdout).unwrap();
    let amps = dump["state"]["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 64);
    assert_eq!(amps[0][0].as_f64().unwrap(), 1.0);
    assert!(amps[1..].iter().all(|a| a[0] == 0.0 && a[1] == 0.0));

    let o = nhfock(&["state", "--spectator", "1", "--z-re", "0.4", "--n-levels", "48", "--n-eff", "32"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dump: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((dump["norm"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert_eq!(dump["report"]["pairs"][0]["saturated"], true);

    let o = nhfock(&["state", "--spectator", "40"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("tail population"));
}

#[test]
fn dump_frame_writes_operators() {
    let dir = TempDir::new().unwrap();
    let frame = out_path(&dir, "frame.json");
    // the scaled caps leave no admissible xi below 16 levels
    let cfg = write(
        &dir,
        "c.json",
        r#"{"trunc": {"n_levels": 4, "n_eff": 3, "tail_tol": 0.5},
            "caps": {"z_cap": 1.0, "xi_min": 0.5, "xi_max": 2.0, "r_cap": 1.0}}"#,
    );
    let o = nhfock(&["state", "--config", &cfg, "--kappa", "2", "--dump-frame", &frame]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let j = read_json(Path::new(&frame));
    assert_eq!(j["operators"].as_object().unwrap().len(), 20);
    assert_eq!(j["operators"]["x1bar"]["dim"], 16);
}

#[test]
fn minimize_reports_the_gap() {
    let o = nhfock(&["minimize"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["pair"], "x1x2");
    let gap = rep["gap"].as_f64().unwrap();
    assert!((-1e-6..=1e-4).contains(&gap), "{gap}");
    assert!(rep["certificate_gap"].as_f64().unwrap() <= 1e-4);
    for k in ["value", "bound", "iterations", "seed"] {
        assert!(!rep[k].is_null());
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("gap to certificate"));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", r#"{"t_grid": {"start": 0.0, "stop": 0.8, "steps": 3}, "state": {"z_re": 0.1}}"#);
    let run = |cmd: &str, threads: &str, name: &str| {
        let out = out_path(&dir, name);
        let o = Command::new(env!("CARGO_BIN_EXE_nhfock"))
            .args([cmd, "--config", &cfg, "--out", &out])
            .env("NHFOCK_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("verify", "1", "a.json"), run("verify", "2", "b.json"));
    assert_eq!(run("sweep", "1", "a.csv"), run("sweep", "3", "b.csv"));
}
