use std::process::Command;

use serde_json::Value;

fn amo(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_amo")).args(args).output().expect("run amo");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn json(args: &[&str]) -> Value {
    let (code, stdout) = amo(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_slice(&stdout).expect("valid JSON")
}

#[test]
fn report_schema() {
    let doc = json(&["verify", "--suite", "eq58"]);
    for key in ["command", "params", "results", "checks"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["command"], "verify");
    assert_eq!(doc["params"]["seed"], 42);
    for check in doc["checks"].as_array().unwrap() {
        for key in ["name", "measured", "bound", "passed"] {
            assert!(check.get(key).is_some());
        }
    }
}

#[test]
fn floats_carry_seventeen_digits() {
    let (_, stdout) = amo(&["lyapunov", "--energy", "0", "--k", "128", "--theta-grid", "16"]);
    let text = String::from_utf8(stdout).unwrap();
    assert!(text.contains("e-1"), "{text}");
    assert!(text.contains("6.1803398874989479e-1"), "{text}");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let (code, stdout) = amo(&["verify", "--suite", "nonsense"]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
}

#[test]
fn sweep_csv_rows_and_transition() {
    let (code, stdout) = amo(&[
        "sweep", "--lambdas", "1,4", "--box", "300", "--fit-range", "10:100", "--energy", "-1:1:5", "--out", "csv",
    ]);
    assert_eq!(code, 0);
    let text = String::from_utf8(stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,energy,lyapunov,mean_abs_slope,mean_ipr,eigenvectors");
    assert_eq!(lines.len(), 1 + 2 * 5);
    let rows: Vec<Vec<f64>> =
        lines[1..].iter().map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    // decay signature strengthens across the transition
    assert!(rows[5][3] >= 5.0 * rows[0][3], "{} vs {}", rows[5][3], rows[0][3]);
    // E = 0 lies in the spectrum, where the subcritical exponent vanishes
    assert!(rows[2][2] <= 0.05, "{}", rows[2][2]);
    assert!(rows[7][2] >= 2f64.ln() - 0.01);
}

#[test]
fn diophantine_golden() {
    let doc = json(&["diophantine", "--omega", "golden", "--depth", "10", "--j-max", "1000"]);
    let quotients = &doc["results"][0]["partial_quotients"];
    assert_eq!(quotients.as_array().unwrap().len(), 10);
    assert!(quotients.as_array().unwrap().iter().all(|a| a == 1));
    assert!(doc["results"][1]["c"].as_f64().unwrap() > 0.0);
}

#[test]
fn rational_frequency_is_not_diophantine() {
    let doc = json(&["diophantine", "--omega", "0.5", "--j-max", "10"]);
    assert_eq!(doc["results"][1]["not_diophantine_at"], 1);
}

#[test]
fn resonances_at_nonresonant_phase() {
    let doc = json(&["resonances", "--theta", "0.3", "--k-max", "10000"]);
    assert!(doc["results"][0]["resonant_k"].as_array().unwrap().is_empty());
}

#[test]
fn green_regularity_row() {
    let doc = json(&["green", "--lambda", "3", "--energy", "10", "--len", "40", "--rate", "0.5"]);
    let row = &doc["results"][0];
    assert!(row["ln_abs_g_left"].as_f64().unwrap() < 0.0);
    assert_eq!(row["regularity"]["regular"], true);
}

#[test]
fn energy_grid_parsing() {
    let doc = json(&["lyapunov", "--energy", "-1:1:3", "--k", "64", "--theta-grid", "8"]);
    let energies: Vec<f64> =
        doc["results"].as_array().unwrap().iter().map(|r| r["energy"].as_f64().unwrap()).collect();
    assert_eq!(energies, vec![-1.0, 0.0, 1.0]);
    let (code, _) = amo(&["lyapunov", "--energy", "1:2"]);
    assert_eq!(code, 2);
}

#[test]
fn threads_from_environment() {
    let a = Command::new(env!("CARGO_BIN_EXE_amo"))
        .args(["verify", "--suite", "lemma9", "--trials", "20"])
        .env("AMO_THREADS", "1")
        .output()
        .unwrap();
    let (_, b) = amo(&["verify", "--suite", "lemma9", "--trials", "20", "--threads", "3"]);
    assert_eq!(a.stdout, b);
}
