use std::path::Path;
use std::process::Command;

use tiltperch::harness::ScenarioConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tiltperch"))
}

fn scenario_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios"))
}

#[test]
fn print_schema_emits_a_loadable_default() {
    let out = bin().arg("print-schema").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        ScenarioConfig::from_toml_str(&text).unwrap(),
        ScenarioConfig::default()
    );
}

#[test]
fn shipped_scenarios_load() {
    for entry in std::fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            ScenarioConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        }
    }
    assert_eq!(
        ScenarioConfig::load(&scenario_dir().join("default.toml")).unwrap(),
        ScenarioConfig::default()
    );
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["run", "--scenario"])
        .arg(scenario_dir().join("hover_90deg.toml"))
        .arg("--out")
        .arg(dir.path())
        .args(["--dt", "0.002"])
        .output()
        .unwrap();
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("log.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3001);
    let metrics: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("metrics.json")).unwrap())
            .unwrap();
    assert_eq!(metrics["completed"], true);
    assert!(dir.path().join("events.csv").exists());
}

#[test]
fn schema_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(
        &bad,
        "format = \"tiltperch-scenario\"\nversion = 1\n[vehicle]\nmas = 1.0\n",
    )
    .unwrap();
    let out = bin()
        .arg("run")
        .arg(&bad)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["run", "--dt", "0.5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .arg("run")
        .arg(dir.path().join("missing.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_abort_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blowup.toml");
    std::fs::write(
        &path,
        "format = \"tiltperch-scenario\"\nversion = 1\nmission = \"hover\"\nduration = 1.0\nevents = []\n\
         [[disturbances]]\nstart = 0.1\nend = 0.2\nangular = [1e308, 1e308, 0.0]\n",
    )
    .unwrap();
    let out = bin()
        .arg("run")
        .arg(&path)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let events = std::fs::read_to_string(dir.path().join("events.csv")).unwrap();
    assert!(events.contains("numerical_abort"));
}

#[test]
fn ablate_reports_every_variant() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("ablate")
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for v in [
        "proposed",
        "no-transitions-rho0",
        "no-transitions-rho0.5",
        "no-freeze",
    ] {
        assert!(dir.path().join(v).join("log.csv").exists(), "{v}");
    }
    let reports: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("comparison.json")).unwrap())
            .unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true)));
}
