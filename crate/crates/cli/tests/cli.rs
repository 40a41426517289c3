use std::path::PathBuf;
use std::process::{Command, Output};

use ghz_cli::commands::{self, TypicalityParams};
use ghz_cli::Report;
use ghz_core::branch::{evolve, typicality_exact, typicality_monte_carlo, MeasureKind};
use ghz_core::logic::enumerate_assignments;
use ghz_core::models::superdeterministic_ghz;
use ghz_core::ontology::{predict_joint, run_audit};
use ghz_core::quantum::{canonical_triples, ghz_state, OutcomeTriple};
use serde_json::Value;

fn ghz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghz"))
        .args(args)
        .output()
        .expect("run ghz")
}

fn json(args: &[&str]) -> (Report, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = ghz(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    (
        Report::from_json(&text).unwrap_or_else(|e| panic!("{e}: {text}")),
        out.status.code().unwrap(),
    )
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    format!("file:{}", p.display())
}

#[test]
fn verify_ghz_reports_eigenvalues() {
    let (r, code) = json(&["verify-ghz"]);
    assert_eq!(code, 0);
    assert!(r.pass);
    assert_eq!(r.schema, "report_v1");
    let eig: Vec<f64> = serde_json::from_value(r.results["eigenvalues"].clone()).unwrap();
    for (e, want) in eig.iter().zip([-1.0, 1.0, 1.0, 1.0]) {
        assert!((e - want).abs() < 1e-12);
    }
    assert!(r.results["grid_max_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(r.results["grid_points"], 64);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        vec!["verify-ghz"],
        vec!["verify-ghz", "--format", "json"],
        vec!["enumerate", "--format", "csv"],
        vec!["audit", "bb", "--format", "json"],
        vec![
            "typicality",
            "--settings",
            "xxx",
            "--outcome",
            "++-",
            "--n",
            "10000",
            "--eps",
            "0.1",
            "--seed",
            "42",
            "--format",
            "json",
        ],
    ] {
        let a = ghz(&args);
        let b = ghz(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn enumerate_matches_core() {
    let (r, code) = json(&["enumerate"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["all_four_count"], 0);
    assert_eq!(r.results["joint_123_count"], 8);
    assert_eq!(r.results, serde_json::to_value(enumerate_assignments()).unwrap());

    let csv = String::from_utf8(ghz(&["enumerate", "--format", "csv"]).stdout).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(reader.records().count(), 64);
}

#[test]
fn audit_bundled_models() {
    let (r, code) = json(&["audit", "superdet"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["factorizability"]["pass"], true);
    assert_eq!(r.results["setting_independence"]["pass"], false);
    assert_eq!(r.results["quantum_agreement"]["pass"], true);
    let direct = run_audit(&superdeterministic_ghz(), &ghz_state()).unwrap();
    let mut want = serde_json::to_value(&direct).unwrap();
    want["expected_deviations"] = Value::Array(Vec::new());
    assert_eq!(r.results, want);

    let (r, code) = json(&["audit", "bb"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["setting_independence"]["pass"], true);
    assert_eq!(r.results["factorizability"]["pass"], false);

    let (r, code) = json(&["audit", "localdet:++++++"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["quantum_agreement"]["pass"], false);
}

#[test]
fn audit_model_files() {
    let (r, code) = json(&["audit", &fixture("superdet_copy.json")]);
    assert_eq!(code, 0);
    assert_eq!(r.results["model_name"], "superdet-copy");
    let (bundled, _) = json(&["audit", "superdet"]);
    for check in [
        "factorizability",
        "setting_independence",
        "quantum_agreement",
        "determinism",
    ] {
        assert_eq!(r.results[check]["pass"], bundled.results[check]["pass"], "{check}");
    }
}

#[test]
fn malformed_input_exits_2_with_diagnostic() {
    for (name, needle) in [
        ("syntax_error.json", "line 7"),
        ("bad_weight.json", "settings_triples[0].atoms"),
        ("missing_entry.json", "settings_triples[0]"),
        ("does_not_exist.json", "does_not_exist.json"),
    ] {
        let out = ghz(&["audit", &fixture(name)]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(needle), "{name}: {err}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(ghz(&["audit", "nonsense"]).status.code(), Some(2));
    assert_eq!(ghz(&["audit", "localdet:+++"]).status.code(), Some(2));
}

#[test]
fn predict_matches_core() {
    let (r, code) = json(&["predict", "superdet", "--settings", "xyy"]);
    assert_eq!(code, 0);
    let xyy = canonical_triples()[1];
    let direct = predict_joint(&superdeterministic_ghz(), &xyy, &ghz_state()).unwrap();
    let rows = r.results["distribution"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for ((row, o), p) in rows.iter().zip(OutcomeTriple::all()).zip(direct.clamped()) {
        assert_eq!(row["outcome"], o.label());
        assert_eq!(row["probability"].as_f64().unwrap(), p);
        let want = if o.parity().value() > 0.0 { 0.25 } else { 0.0 };
        assert!((direct[o] - want).abs() < 1e-12);
    }
}

#[test]
fn predict_radian_settings() {
    let (r, code) = json(&["predict", "bb", "--settings", "0,pi/2,pi/2"]);
    assert_eq!(code, 0);
    assert_eq!(r.results["settings"], "xyy");
    // The superdeterministic model is only defined on the canonical triples.
    assert_eq!(
        ghz(&["predict", "superdet", "--settings", "0.1,0.2,0.3"]).status.code(),
        Some(2)
    );
    assert_eq!(ghz(&["predict", "bb", "--settings", "xz"]).status.code(), Some(2));
}

#[test]
fn branches_relative_worlds() {
    let (r, code) = json(&["branches", "--settings", "xxx", "--stage", "t1", "--observer", "A"]);
    assert_eq!(code, 0);
    let worlds = r.results["relative_worlds"].as_array().unwrap();
    assert_eq!(worlds.len(), 2);
    for w in worlds {
        assert!((w["weight"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    }
    let (r, _) = json(&["branches", "--settings", "yyx", "--stage", "t2"]);
    let (_, t2) = evolve(&canonical_triples()[3]).unwrap();
    assert_eq!(r.results["terms"], serde_json::to_value(t2.terms()).unwrap());
    assert_eq!(
        ghz(&["branches", "--settings", "yyy", "--stage", "t1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ghz(&["branches", "--settings", "xxx", "--stage", "t9"]).status.code(),
        Some(2)
    );
}

#[test]
fn typicality_matches_core() {
    let (r, code) = json(&["typicality", "--p", "0.5", "--n", "100", "--eps", "0.1", "--exact"]);
    assert_eq!(code, 0);
    let direct = typicality_exact(0.5, 100, 0.1).unwrap();
    assert_eq!(r.results, serde_json::to_value(&direct).unwrap());
    assert!((direct.measure_of_deviation_set - 0.03520020021770481).abs() < 1e-12);

    let args = [
        "typicality",
        "--settings",
        "xxx",
        "--outcome",
        "++-",
        "--n",
        "10000",
        "--eps",
        "0.1",
        "--seed",
        "42",
    ];
    let (r, _) = json(&args);
    let o: OutcomeTriple = "++-".parse().unwrap();
    let direct = typicality_monte_carlo(&canonical_triples()[0], o, 10_000, 0.1, MeasureKind::Born, 42).unwrap();
    assert_eq!(r.results, serde_json::to_value(&direct).unwrap());
    assert_eq!(r.inputs["seed"], 42);
}

#[test]
fn typicality_requires_seed() {
    let out = ghz(&[
        "typicality",
        "--settings",
        "xxx",
        "--outcome",
        "++-",
        "--n",
        "10",
        "--eps",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("--seed"));
    let out = ghz(&["typicality", "--p", "1.5", "--n", "10", "--eps", "0.1", "--exact"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_round_trip() {
    let outputs = [
        commands::verify_ghz().unwrap(),
        commands::enumerate().unwrap(),
        commands::audit("bb").unwrap(),
        commands::predict("bb", "0.3,-1.1,2").unwrap(),
        commands::branches("xyy", "t2", None).unwrap(),
        commands::typicality(&TypicalityParams::Exact {
            p: 0.25,
            n: 1000,
            eps: 0.05,
        })
        .unwrap(),
    ];
    for out in outputs {
        let text = out.report.to_json().unwrap();
        assert_eq!(Report::from_json(&text).unwrap(), out.report);
    }
}

#[test]
fn text_and_csv_forms() {
    let text = String::from_utf8(ghz(&["audit", "superdet"]).stdout).unwrap();
    assert!(text.contains("setting_independence: FAIL"));
    assert!(text.ends_with("result: PASS\n"));
    let csv = String::from_utf8(ghz(&["predict", "superdet", "--settings", "xxx", "--format", "csv"]).stdout).unwrap();
    assert!(csv.starts_with("outcome,probability\n"));
    assert_eq!(csv.lines().count(), 9);
}
