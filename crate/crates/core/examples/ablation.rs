//! Runs the default perch/unperch scenario under every switching variant and
//! prints the comparison against the proposed law.

use tiltperch::harness::{compare_with, run_scenario, Expectation, ScenarioConfig, Variant};

fn main() {
    let base = ScenarioConfig::default();
    let proposed = run_scenario(&base).expect("default scenario is valid");
    for variant in Variant::ALL {
        let run = if variant == Variant::Proposed {
            proposed.clone()
        } else {
            run_scenario(&base.with_variant(variant)).expect("default scenario is valid")
        };
        println!("== {} ({:?})", variant.name(), run.outcome);
        for e in run.events.iter() {
            println!("  t={:.3} {} {}", e.t, e.kind.name(), e.kind.detail());
        }
        if variant != Variant::Proposed {
            let report = compare_with(
                "proposed",
                &proposed.metrics,
                variant.name(),
                &run.metrics,
                &Expectation::for_variant(variant),
            );
            print!("{}", report.render());
        }
    }
}
