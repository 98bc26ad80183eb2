//! Hovers with the body pitched 90 degrees after starting 10 cm off the
//! setpoint, and prints the tracking error as it converges.

use tiltperch::harness::scenario::Mission;
use tiltperch::harness::{run_scenario, ScenarioConfig};
use tiltperch::Vec3;

fn main() {
    let mut cfg = ScenarioConfig {
        mission: Mission::Hover,
        events: Vec::new(),
        duration: 6.0,
        start_offset: Vec3::new(0.1, 0.0, 0.0),
        ..ScenarioConfig::default()
    };
    cfg.plan.hover_pitch = std::f64::consts::FRAC_PI_2;
    let run = run_scenario(&cfg).expect("valid scenario");
    for r in run.records.iter().step_by(500) {
        println!(
            "t={:5.2}  |e_p|={:.5} m  |e_R|={:.5}  pitch={:6.2} deg  tilt={:?}",
            r.t,
            r.position_error,
            r.attitude_error,
            r.pitch.to_degrees(),
            r.tilt.map(|a| (a.to_degrees() * 10.0).round() / 10.0)
        );
    }
    println!("outcome: {:?}", run.outcome);
}
