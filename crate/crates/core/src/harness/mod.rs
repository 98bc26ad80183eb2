//! Scenario runner: configuration, the closed loop, telemetry, metrics and
//! run comparison.

pub mod compare;
pub mod log;
pub mod metrics;
pub mod scenario;
pub mod sim;

pub use compare::{compare, compare_with, ComparisonReport, Expectation};
pub use log::{to_csv, LogRecord};
pub use metrics::{compute_metrics, Metrics};
pub use scenario::{ScenarioConfig, Variant};
pub use sim::{run_scenario, RunOutput, Simulation};
