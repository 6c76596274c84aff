use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nadd::thermo::FINITE_HORIZON_WARNING;
use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn nadd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nadd")).args(args).output().unwrap()
}

/// Runs `command` on a config file and returns the exit code and output dir.
fn run(command: &str, cfg: &Path, extra: &[&str]) -> (i32, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec![command, "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = nadd(&args);
    (out.status.code().unwrap(), dir)
}

fn report(dir: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(format!("{command}.report.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p
}

fn has_warning(r: &Value, w: &str) -> bool {
    r["warnings"].as_array().unwrap().iter().any(|x| x == w)
}

#[test]
fn every_command_succeeds_and_writes_its_files() {
    let cases: [(&str, &str, &[&str]); 12] = [
        ("seminorm", "golden_mean_seminorm.json", &["seminorm_trace.csv"]),
        (
            "equivalent-potential",
            "cocycle_2x2.json",
            &["certificate.json", "cauchy_table.csv", "defect_trace.csv", "grid_defects.csv"],
        ),
        ("pressure", "full2_zero.json", &[]),
        ("pressure", "cocycle_2x2.json", &["pressure_trace.csv"]),
        ("variational-check", "full2_zero.json", &[]),
        ("gibbs-check", "bernoulli_gibbs.json", &["gibbs_constants.csv"]),
        ("quasi-bernoulli", "hidden_markov.json", &["coupling_constants.csv", "coupling_by_horizon.csv"]),
        ("spectrum", "spin_spectrum.json", &["pressure_curve.csv", "spectrum.csv"]),
        ("ldp", "spin_spectrum.json", &["rate_function.csv"]),
        ("additivity", "cocycle_2x2.json", &["additivity_defects.csv", "additivity_by_horizon.csv"]),
        ("variation", "cocycle_2x2.json", &["variation.csv"]),
        ("validate", "full2_zero.json", &[]),
    ];
    for (command, cfg, files) in cases {
        let (code, dir) = run(command, &config(cfg), &[]);
        assert_eq!(code, 0, "{command} on {cfg}");
        let r = report(dir.path(), command);
        assert_eq!(r["command"], command);
        assert!(r["provenance"]["wall_time_seconds"].is_number());
        for f in files {
            assert!(dir.path().join(f).is_file(), "{command} on {cfg} misses {f}");
        }
        if command != "validate" {
            // The effective config is echoed with every default filled in.
            assert!(r["config"]["params"]["k_grid"].is_array(), "{command}");
        }
    }
}

#[test]
fn pressure_of_zero_potential_is_log_two() {
    let (code, dir) = run("pressure", &config("full2_zero.json"), &[]);
    assert_eq!(code, 0);
    let p = report(dir.path(), "pressure")["results"]["pressure"].as_f64().unwrap();
    assert!((p - 2f64.ln()).abs() <= 1e-12);
}

#[test]
fn equivalent_potential_writes_a_certificate() {
    let (code, dir) = run("equivalent-potential", &config("cocycle_2x2.json"), &[]);
    assert_eq!(code, 0);
    let cert: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["version"], "cert_v1");
    assert_eq!(cert["cauchy_table"].as_array().unwrap().len(), 3);
    assert!(cert["tail_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn bernoulli_gibbs_check_has_unit_constants() {
    let (code, dir) = run("gibbs-check", &config("bernoulli_gibbs.json"), &[]);
    assert_eq!(code, 0);
    let r = report(dir.path(), "gibbs-check");
    assert_eq!(r["results"]["gibbs"]["verdict"], "gibbs_evidence");
    let mut csv = csv::Reader::from_path(dir.path().join("gibbs_constants.csv")).unwrap();
    let col = csv.headers().unwrap().iter().position(|h| h == "k_n").unwrap();
    let mut rows = 0;
    for rec in csv.records() {
        let k: f64 = rec.unwrap()[col].parse().unwrap();
        assert!((k - 1.0).abs() <= 1e-9);
        rows += 1;
    }
    assert_eq!(rows, 10);
}

#[test]
fn failing_gibbs_verdict_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{
          "sft": { "alphabet_size": 2, "full_shift": true },
          "measure": { "kind": "bernoulli", "probs": [1.0, 0.0] },
          "potential": { "depth": 1, "values": { "0": 0.0, "1": 0.0 } },
          "params": { "n_max": 6, "p_target": 0.0 }
        }"#,
    );
    let (code, dir) = run("gibbs-check", &cfg, &[]);
    assert_eq!(code, 2);
    let r = report(dir.path(), "gibbs-check");
    assert_eq!(r["results"]["gibbs"]["verdict"], "fails");
}

#[test]
fn finite_horizon_warning_accompanies_limsup_estimates() {
    for (command, cfg) in [
        ("pressure", "cocycle_2x2.json"),
        ("gibbs-check", "bernoulli_gibbs.json"),
        ("gibbs-check", "hidden_markov.json"),
    ] {
        let (code, dir) = run(command, &config(cfg), &[]);
        assert_eq!(code, 0);
        assert!(has_warning(&report(dir.path(), command), FINITE_HORIZON_WARNING), "{command} on {cfg}");
    }
}

#[test]
fn results_are_deterministic() {
    for (command, cfg) in [
        ("equivalent-potential", "cocycle_2x2.json"),
        ("spectrum", "spin_spectrum.json"),
        ("gibbs-check", "hidden_markov.json"),
    ] {
        let (_, a) = run(command, &config(cfg), &[]);
        let (_, b) = run(command, &config(cfg), &[]);
        let (ra, rb) = (report(a.path(), command), report(b.path(), command));
        assert_eq!(ra["results"].to_string(), rb["results"].to_string(), "{command}");
        assert_eq!(ra["config"].to_string(), rb["config"].to_string());
        for entry in std::fs::read_dir(a.path()).unwrap() {
            let name = entry.unwrap().file_name();
            if name.to_string_lossy().ends_with(".csv") {
                let x = std::fs::read(a.path().join(&name)).unwrap();
                let y = std::fs::read(b.path().join(&name)).unwrap();
                assert_eq!(x, y, "{name:?}");
            }
        }
    }
}

#[test]
fn overrides_are_echoed() {
    let (code, dir) = run("pressure", &config("full2_zero.json"), &["--tol", "1e-7", "--cap", "5000"]);
    assert_eq!(code, 0);
    let r = report(dir.path(), "pressure");
    assert_eq!(r["config"]["params"]["tol"], 1e-7);
    assert_eq!(r["config"]["params"]["cap"], 5000);
    assert_eq!(r["provenance"]["cap"], 5000);
}

#[test]
fn cap_violation_names_cap_and_size() {
    let out = nadd(&[
        "additivity",
        "--config",
        config("cocycle_2x2.json").to_str().unwrap(),
        "--out",
        tempfile::tempdir().unwrap().path().to_str().unwrap(),
        "--cap",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("cap is 100") && err.contains("needs"), "{err}");
}

#[test]
fn validate_reports_diagnostics() {
    let (code, dir) = run("validate", &config("full2_zero.json"), &[]);
    assert_eq!(code, 0);
    assert_eq!(report(dir.path(), "validate")["results"]["diagnostics"], Value::Array(vec![]));

    let (code, dir) = run("validate", &config("invalid/non_primitive.json"), &[]);
    assert_eq!(code, 1);
    let d = report(dir.path(), "validate")["results"]["diagnostics"].clone();
    assert_eq!(d.as_array().unwrap().len(), 1);
    assert!(d[0]["message"].as_str().unwrap().contains("not primitive"));

    let (code, dir) = run("validate", &config("invalid/zero_cocycle_entry.json"), &[]);
    assert_eq!(code, 1);
    let d = report(dir.path(), "validate")["results"]["diagnostics"].clone();
    assert_eq!(d.as_array().unwrap().len(), 1);
    assert!(d[0]["message"].as_str().unwrap().contains("strict positivity"));
}

#[test]
fn schema_violations_name_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{ "sft": { "alphabet_size": 2, "full_shift": true }, "params": { "tol": "small" } }"#,
    );
    let out = nadd(&["pressure", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.tol"));

    let diags = nadd::cli::validate_str(r#"{ "sft": { "alphabet_size": 2, "full_shift": true }, "extra": 1 }"#);
    assert_eq!(diags.len(), 1);
    assert!(diags[0].message.contains("extra"));
}

#[test]
fn invalid_config_fails_every_command() {
    let (code, _) = run("pressure", &config("invalid/non_primitive.json"), &[]);
    assert_eq!(code, 1);
    let (code, _) = run("spectrum", &config("cocycle_2x2.json").with_file_name("missing.json"), &[]);
    assert_eq!(code, 1);
}
