//! Command-line front end for scenario runs, ablations and the acceptance checks.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tiltperch::harness::log::{events_csv, metrics_json, to_csv};
use tiltperch::harness::scenario::SCHEMA;
use tiltperch::harness::sim::Outcome;
use tiltperch::harness::{
    compare_with, run_scenario, Expectation, RunOutput, ScenarioConfig, Variant,
};
use tiltperch::ScenarioError;

const EXIT_SCHEMA: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tiltperch",
    version,
    about = "Perching/unperching tiltrotor simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write log.csv, events.csv and metrics.json.
    Run(RunArgs),
    /// Run every switching variant on one scenario and compare against the proposed law.
    Ablate(RunArgs),
    /// Run the acceptance checks.
    Verify,
    /// Print the scenario file format and a complete default scenario.
    PrintSchema,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML). The built-in default is used when omitted.
    scenario: Option<PathBuf>,
    /// Same as the positional argument.
    #[arg(long = "scenario", conflicts_with = "scenario")]
    scenario_flag: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Step size in seconds, in (0, 0.01].
    #[arg(long)]
    dt: Option<f64>,
    /// proposed | no-transitions-rho0 | no-transitions-rho0.5 | no-freeze
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Variant>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    Variant::parse(s).ok_or_else(|| {
        let names: Vec<_> = Variant::ALL.iter().map(|v| v.name()).collect();
        format!(
            "unknown variant {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

impl RunArgs {
    fn config(&self) -> Result<ScenarioConfig, ScenarioError> {
        let mut cfg = match self.scenario.as_ref().or(self.scenario_flag.as_ref()) {
            Some(path) => ScenarioConfig::load(path)?,
            None => ScenarioConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        if let Some(v) = self.variant {
            cfg.variant = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_run(dir: &Path, run: &RunOutput) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("log.csv"), to_csv(&run.records))?;
    fs::write(dir.join("events.csv"), events_csv(&run.events))?;
    fs::write(dir.join("metrics.json"), metrics_json(&run.metrics))
}

fn exit_for(outcome: &Outcome) -> ExitCode {
    match outcome {
        Outcome::NumericalAbort { .. } => ExitCode::from(EXIT_NUMERICAL),
        _ => ExitCode::SUCCESS,
    }
}

fn run(args: &RunArgs) -> Result<ExitCode, ScenarioError> {
    let cfg = args.config()?;
    let out = run_scenario(&cfg)?;
    if let Err(e) = write_run(&args.out, &out) {
        eprintln!("error: writing {}: {e}", args.out.display());
        return Ok(ExitCode::FAILURE);
    }
    println!("{}", metrics_json(&out.metrics));
    Ok(exit_for(&out.outcome))
}

fn ablate(args: &RunArgs) -> Result<ExitCode, ScenarioError> {
    let cfg = args.config()?;
    let runs: Vec<(Variant, RunOutput)> = std::thread::scope(|s| {
        let handles: Vec<_> = Variant::ALL
            .into_iter()
            .map(|v| {
                let c = cfg.with_variant(v);
                s.spawn(move || run_scenario(&c).map(|r| (v, r)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread"))
            .collect::<Result<_, _>>()
    })?;
    let proposed = &runs[0].1;
    let mut reports = Vec::new();
    let mut code = ExitCode::SUCCESS;
    for (v, r) in &runs {
        if let Err(e) = write_run(&args.out.join(v.name()), r) {
            eprintln!("error: writing {}: {e}", args.out.display());
            return Ok(ExitCode::FAILURE);
        }
        if matches!(r.outcome, Outcome::NumericalAbort { .. }) {
            code = ExitCode::from(EXIT_NUMERICAL);
        }
        if *v != Variant::Proposed {
            let report = compare_with(
                Variant::Proposed.name(),
                &proposed.metrics,
                v.name(),
                &r.metrics,
                &Expectation::for_variant(*v),
            );
            println!("{}", report.render());
            reports.push(report);
        }
    }
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
    if let Err(e) = fs::write(args.out.join("comparison.json"), json) {
        eprintln!("error: writing comparison: {e}");
        return Ok(ExitCode::FAILURE);
    }
    Ok(code)
}

fn verify() -> ExitCode {
    let results = tiltperch::verify::run_all();
    for r in &results {
        println!("{}", r.line());
    }
    if results.iter().all(|r| r.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Ablate(args) => ablate(args),
        Command::Verify => Ok(verify()),
        Command::PrintSchema => {
            print!("{SCHEMA}\n{}", ScenarioConfig::default().to_toml_string());
            Ok(ExitCode::SUCCESS)
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_SCHEMA)
    })
}
