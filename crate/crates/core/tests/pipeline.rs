use tiltperch::harness::log::{csv_header, events_csv, sha256_hex, to_csv, CSV_COLUMNS};
use tiltperch::harness::scenario::{DisturbanceWindow, Mission, NoiseConfig, StartCondition};
use tiltperch::harness::sim::{EventKind, Outcome};
use tiltperch::harness::{compare, run_scenario, ScenarioConfig, Simulation, Variant};
use tiltperch::verify::GOLDEN_DEFAULT_CSV_SHA256;
use tiltperch::{Mode, Vec3};

fn hover_only(duration: f64) -> ScenarioConfig {
    ScenarioConfig {
        mission: Mission::Hover,
        events: Vec::new(),
        duration,
        ..ScenarioConfig::default()
    }
}

#[test]
fn hover_setpoint_is_held() {
    let run = run_scenario(&hover_only(10.0)).unwrap();
    assert!(run.outcome.is_completed());
    let worst = run
        .records
        .iter()
        .map(|r| r.position_error)
        .fold(0.0, f64::max);
    assert!(worst < 0.01, "{worst}");
    assert!(run.records.iter().all(|r| r.mode == Mode::F && !r.attached));
}

#[test]
fn one_record_per_tick() {
    let cfg = hover_only(0.5);
    let run = run_scenario(&cfg).unwrap();
    assert_eq!(run.records.len(), 500);
    for (k, r) in run.records.iter().enumerate() {
        assert_eq!(r.t, k as f64 * cfg.dt);
    }
}

#[test]
fn default_log_matches_golden_hash() {
    let run = run_scenario(&ScenarioConfig::default()).unwrap();
    let csv = to_csv(&run.records);
    assert_eq!(sha256_hex(csv.as_bytes()), GOLDEN_DEFAULT_CSV_SHA256.trim());
    assert_eq!(
        csv,
        to_csv(&run_scenario(&ScenarioConfig::default()).unwrap().records)
    );
}

#[test]
fn csv_column_order() {
    let expected = "t,px,py,pz,vx,vy,vz,pitch,qw,qx,qy,qz,wx,wy,wz,mode,attached,eta_d,eta,T1,T2,T3,T4,Tcmd1,Tcmd2,Tcmd3,Tcmd4,nu1,nu2,nu3,nu4,dhatx,dhaty,dhatz,lambda_hat,lambda_true,eR_norm,ep_norm,sat_any";
    assert_eq!(csv_header(), expected);
    let run = run_scenario(&hover_only(0.01)).unwrap();
    let csv = to_csv(&run.records);
    for line in csv.lines() {
        assert_eq!(line.split(',').count(), CSV_COLUMNS.len());
    }
}

#[test]
fn seeded_noise_is_reproducible() {
    let mut cfg = hover_only(2.0);
    cfg.noise = NoiseConfig {
        position_std: 0.002,
        velocity_std: 0.01,
    };
    let a = to_csv(&run_scenario(&cfg).unwrap().records);
    let b = to_csv(&run_scenario(&cfg).unwrap().records);
    assert_eq!(a, b);
    cfg.seed = 1;
    let c = to_csv(&run_scenario(&cfg).unwrap().records);
    assert_ne!(a, c);
}

#[test]
fn events_are_logged_on_their_ticks() {
    let run = run_scenario(&ScenarioConfig::default()).unwrap();
    let kinds: Vec<&str> = run.events.iter().map(|e| e.kind.name()).collect();
    for needed in ["signal", "mode_change", "perch_command", "attached"] {
        assert!(kinds.contains(&needed), "{needed} missing from {kinds:?}");
    }
    assert!(kinds.contains(&"released") || kinds.contains(&"forced_detach"));

    let row = |t: f64| {
        run.records
            .iter()
            .position(|r| r.t == t)
            .expect("event time is a tick")
    };
    for e in &run.events {
        let i = row(e.t);
        match &e.kind {
            EventKind::ModeChange { from, to } => {
                assert_eq!(run.records[i].mode, *to);
                assert_eq!(run.records[i - 1].mode, *from);
            }
            EventKind::PerchCommand { target } => {
                assert_eq!(run.records[i].eta_d, *target);
                assert_ne!(run.records[i - 1].eta_d, *target);
            }
            // contact changes take effect at the end of the tick
            EventKind::Attached => assert!(!run.records[i].attached && run.records[i + 1].attached),
            EventKind::Released | EventKind::ForcedDetach => {
                assert!(run.records[i].attached && !run.records[i + 1].attached)
            }
            _ => {}
        }
    }
    let csv = events_csv(&run.events);
    assert!(csv.starts_with("t,event,detail\n"));
    assert_eq!(csv.lines().count(), run.events.len() + 1);
}

#[test]
fn perch_servo_edges_follow_mode_changes() {
    let run = run_scenario(&ScenarioConfig::default()).unwrap();
    for w in run.records.windows(2) {
        if w[0].eta_d != w[1].eta_d {
            let edge = (w[0].mode, w[1].mode);
            assert!(
                matches!(edge, (Mode::F, Mode::F2P) | (Mode::P2F, Mode::F)),
                "{edge:?}"
            );
        }
    }
}

#[test]
fn mode_sequence_of_the_default_cycle() {
    let run = run_scenario(&ScenarioConfig::default()).unwrap();
    let changes: Vec<(Mode, Mode)> = run
        .events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::ModeChange { from, to } => Some((from, to)),
            _ => None,
        })
        .collect();
    assert_eq!(
        changes,
        vec![
            (Mode::F, Mode::F2P),
            (Mode::F2P, Mode::P),
            (Mode::P, Mode::P2F),
            (Mode::P2F, Mode::F)
        ]
    );
}

#[test]
fn proposed_cycle_outcome() {
    let run = run_scenario(&ScenarioConfig::default()).unwrap();
    let m = &run.metrics;
    assert!(m.perch_achieved && m.unperch_achieved && m.completed);
    assert!(m.min_clearance.unwrap() > 0.0);
}

#[test]
fn ablation_without_transitions_drops_further() {
    let base = ScenarioConfig::default();
    let proposed = run_scenario(&base).unwrap();
    let ablated = run_scenario(&base.with_variant(Variant::NoTransitionsRho0)).unwrap();
    assert!(ablated.metrics.z_drop.unwrap() > proposed.metrics.z_drop.unwrap());
    let report = compare("proposed", &proposed.metrics, "ablated", &ablated.metrics);
    assert!(report.delta("z_drop").unwrap().delta.unwrap() > 0.0);
    let same = compare("a", &proposed.metrics, "b", &proposed.metrics);
    assert!(same.deltas.iter().all(|d| d.delta.is_none_or(|x| x == 0.0)));
}

#[test]
fn ground_contact_ends_the_run() {
    let mut cfg = hover_only(5.0);
    cfg.disturbances.push(DisturbanceWindow {
        start: 0.5,
        end: 5.0,
        force: [0.0, 0.0, -60.0],
        angular: [0.0; 3],
    });
    let run = run_scenario(&cfg).unwrap();
    assert!(matches!(run.outcome, Outcome::GroundContact { .. }));
    assert!(!run.metrics.completed && run.metrics.failure.is_some());
    assert!(run.records.len() < 5000);
    assert_eq!(run.events.last().unwrap().kind, EventKind::GroundContact);
}

#[test]
fn non_finite_state_aborts_with_partial_log() {
    let mut cfg = hover_only(1.0);
    cfg.disturbances.push(DisturbanceWindow {
        start: 0.1,
        end: 0.2,
        force: [0.0; 3],
        angular: [1e308, 1e308, 0.0],
    });
    let run = run_scenario(&cfg).unwrap();
    assert!(matches!(run.outcome, Outcome::NumericalAbort { .. }));
    assert!(!run.records.is_empty() && run.records.len() < 1000);
    assert!(!run.metrics.completed);
}

#[test]
fn perched_start_stays_attached() {
    let cfg = ScenarioConfig {
        start: StartCondition::Perched,
        mission: Mission::Hover,
        events: Vec::new(),
        duration: 3.0,
        ..ScenarioConfig::default()
    };
    let mut sim = Simulation::new(&cfg).unwrap();
    assert_eq!(sim.mode(), Mode::P);
    while sim.step() {}
    assert!(sim
        .records()
        .iter()
        .all(|r| r.attached && r.mode == Mode::P));
    assert!(sim.records().iter().all(|r| r.saturated == [false; 4]));
    // the wall carries the rest of the weight: no net normal pull on the magnets
    let r = sim.records().last().unwrap();
    assert!(r.lambda_true.abs() < 1e-6, "{}", r.lambda_true);
}

#[test]
fn gust_is_rejected_in_hover() {
    let mut cfg = hover_only(6.0);
    cfg.disturbances.push(DisturbanceWindow {
        start: 1.0,
        end: 6.0,
        force: [2.0, 0.0, -3.0],
        angular: [0.0; 3],
    });
    let run = run_scenario(&cfg).unwrap();
    let last = run.records.last().unwrap();
    assert!(last.position_error < 1e-3, "{}", last.position_error);
    assert!((last.disturbance_estimate - Vec3::new(2.0, 0.0, -3.0)).norm() < 1e-3);
}
