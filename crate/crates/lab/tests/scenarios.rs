use mixlab::config::{LedrappierParams, RamseyParams};
use mixlab::report::Table;
use mixlab::{export_report, run_experiment, verify, ExperimentConfig, Format, Report, SCENARIOS};

fn default_run(name: &str) -> Report {
    run_experiment(&ExperimentConfig::default_for(name).unwrap()).unwrap()
}

#[test]
fn every_scenario_is_deterministic_and_round_trips() {
    for name in SCENARIOS {
        let a = default_run(name);
        let b = default_run(name);
        assert!(a.same_content(&b), "{name}");
        assert_eq!(a.scenario, name);
        let json = export_report(&a, Format::Json).unwrap();
        let back = Report::from_json(std::str::from_utf8(&json).unwrap()).unwrap();
        assert_eq!(back, a, "{name}");
        assert_eq!(export_report(&back, Format::Json).unwrap(), json, "{name}");
        assert!(back.config().unwrap() == ExperimentConfig::default_for(name).unwrap(), "{name}");
    }
}

#[test]
fn default_verdicts() {
    for name in SCENARIOS {
        let rep = default_run(name);
        assert_eq!(rep.verdict.pass, name != "polynomial_paths", "{name}: {}", rep.verdict.line);
    }
}

#[test]
fn ledrappier_csv_rows() {
    let rep = default_run("ledrappier_counterexample");
    let csv = String::from_utf8(export_report(&rep, Format::Csv).unwrap()).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,correlation,gap"));
    for (n, line) in (1..=10).zip(lines) {
        assert_eq!(line, format!("{n},1/4,1/8"));
    }
    assert_eq!(rep.verdict.line, "2-mixing pair gaps all 0; triple gap persistent");
    assert_eq!(rep.table("pairs").unwrap().rows.len(), 17 * 17 - 1);
}

#[test]
fn empty_table_exports_header_only() {
    let mut rep = default_run("polynomial_paths");
    rep.tables = vec![Table::new("witness", &["a", "b", "n"])];
    assert_eq!(export_report(&rep, Format::Csv).unwrap(), b"a,b,n\n");
    rep.tables.clear();
    assert!(export_report(&rep, Format::Csv).unwrap().is_empty());
}

#[test]
fn verify_detects_tampering() {
    let mut rep = default_run("sumfree_selftest");
    assert!(verify(&rep).unwrap().reproduced);
    rep.tables[0].rows[0][2] = "false".into();
    assert!(!verify(&rep).unwrap().reproduced);
}

#[test]
fn guards_and_schema_errors() {
    let cfg = ExperimentConfig::LedrappierCounterexample(LedrappierParams {
        n_max: 100_000,
        ..Default::default()
    });
    assert!(matches!(run_experiment(&cfg), Err(mixlab::LabError::Guard { .. })));
    assert!(ExperimentConfig::from_json(r#"{"scenario":"nope"}"#).is_err());
    assert!(ExperimentConfig::from_json(r#"{"scenario":"ramsey_selftest","params":{"budjet":3}}"#).is_err());
    let cfg = ExperimentConfig::from_json(r#"{"scenario":"ramsey_selftest"}"#).unwrap();
    assert!(cfg == ExperimentConfig::RamseySelftest(RamseyParams::default()));
}

#[test]
fn small_budget_still_reports() {
    let mut cfg = ExperimentConfig::default_for("ramsey_selftest").unwrap();
    cfg.set_budget(1);
    let rep = run_experiment(&cfg).unwrap();
    assert_eq!(rep.inputs["budget"], 1);
}
