//! Runs the default perch/unperch cycle and writes the log, events and
//! metrics to a directory (default `out/perch_unperch`).

use std::path::PathBuf;

use tiltperch::harness::log::{events_csv, metrics_json, to_csv};
use tiltperch::harness::{run_scenario, ScenarioConfig};

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out/perch_unperch"));
    let run = run_scenario(&ScenarioConfig::default()).expect("default scenario is valid");
    for e in &run.events {
        println!("t={:7.3}  {:<14} {}", e.t, e.kind.name(), e.kind.detail());
    }
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("log.csv"), to_csv(&run.records))?;
    std::fs::write(dir.join("events.csv"), events_csv(&run.events))?;
    std::fs::write(dir.join("metrics.json"), metrics_json(&run.metrics))?;
    println!("{}", metrics_json(&run.metrics));
    println!("wrote {} rows to {}", run.records.len(), dir.display());
    Ok(())
}
