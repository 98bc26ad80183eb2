//! Acceptance checks, runnable from the CLI (`tiltperch verify`) and from the
//! `acceptance` test target.
//!
//! Each check compares the implementation against an independent oracle
//! (explicit transition table, KKT least squares, piecewise-constant-jerk
//! collocation, closed-form first-order response) or against a physical
//! invariant.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use nalgebra::{DMatrix, DVector, Matrix3, SMatrix, SVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocation::{forward_wrench, Allocator, Wrench};
use crate::control::Setpoint;
use crate::estimation::EstimatorState;
use crate::geometry::{exp_so3, log_so3, Rotation, Vec3};
use crate::harness::log::{sha256_hex, to_csv};
use crate::harness::scenario::{Mission, StartCondition};
use crate::harness::{run_scenario, RunOutput, ScenarioConfig, Variant};
use crate::planner::{min_jerk_segment, Boundary, Plan, Segment};
use crate::supervisor::{transition, Mode, SupervisorState, SwitchConfig};
use crate::vehicle::{
    integrate, ActuatorState, ContactState, Disturbances, VehicleParams, VehicleState, WallModel,
};

/// SHA-256 of the default scenario's CSV log.
pub const GOLDEN_DEFAULT_CSV_SHA256: &str = include_str!("../tests/golden/default_run.sha256");

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u8, name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            id,
            name,
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

/// Runs every check. Scenario runs happen in parallel.
pub fn run_all() -> Vec<CriterionResult> {
    let base = ScenarioConfig::default();
    let (runs, pipeline_seconds) = std::thread::scope(|s| {
        let handles: Vec<_> = Variant::ALL
            .into_iter()
            .map(|v| {
                let cfg = base.with_variant(v);
                s.spawn(move || {
                    let start = Instant::now();
                    let out = run_scenario(&cfg).expect("default scenario is valid");
                    (v, out, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        let mut runs = Vec::new();
        let mut proposed_seconds = 0.0;
        for h in handles {
            let (v, out, secs) = h.join().expect("scenario thread");
            if v == Variant::Proposed {
                proposed_seconds = secs;
            }
            runs.push((v, out));
        }
        (runs, proposed_seconds)
    });
    let get = |v: Variant| &runs.iter().find(|(w, _)| *w == v).expect("variant ran").1;
    let proposed = get(Variant::Proposed);
    vec![
        mode_table(),
        estimator_law(),
        freeze_semantics(),
        allocation_round_trip(),
        pitched_hover(),
        trajectory_optimality(),
        full_pipeline(proposed, pipeline_seconds),
        drop_ablation(proposed, get(Variant::NoTransitionsRho0)),
        collision_ablation(proposed, get(Variant::NoTransitionsRhoHalf)),
        saturation_ablation(proposed, get(Variant::NoFreeze)),
        determinism(proposed),
        physics_sanity(),
    ]
}

// 1 ------------------------------------------------------------------------

/// Expected successor and perch target, written out case by case.
fn expected_transition(mode: Mode, s_f2p: bool, s_p2f: bool, band: usize) -> (Mode, f64) {
    // band 0: λ below the p2f threshold, 1: between thresholds, 2: above f2p
    use Mode::*;
    let row: [(Mode, f64); 3] = match (mode, s_f2p, s_p2f) {
        (F, false, _) => [(F, 0.0); 3],
        (F, true, _) => [(F2P, 1.0); 3],
        (F2P, _, _) => [(F2P, 1.0), (F2P, 1.0), (P, 1.0)],
        (P, _, false) => [(P, 1.0); 3],
        (P, _, true) => [(P2F, 1.0); 3],
        (P2F, _, _) => [(F, 0.0), (P2F, 1.0), (P2F, 1.0)],
    };
    row[band]
}

pub fn mode_table() -> CriterionResult {
    let start = Instant::now();
    let cfg = SwitchConfig::default();
    let lambdas = [
        cfg.p2f_threshold - 1.0,
        0.5 * (cfg.p2f_threshold + cfg.f2p_threshold),
        cfg.f2p_threshold + 1.0,
    ];
    let mut cases = 0;
    let mut mismatches = Vec::new();
    let mut bad_edges = 0;
    for mode in Mode::ALL {
        for (s_f2p, s_p2f) in [(false, false), (true, false), (false, true), (true, true)] {
            for (band, &lambda) in lambdas.iter().enumerate() {
                cases += 1;
                let perch_target = if mode == Mode::F { 0.0 } else { 1.0 };
                let sup = SupervisorState {
                    mode,
                    perch_target,
                    ..SupervisorState::default()
                };
                let next = transition(&sup, lambda, s_f2p, s_p2f, &cfg, 1.0);
                let (want_mode, want_target) = expected_transition(mode, s_f2p, s_p2f, band);
                if next.mode != want_mode || next.perch_target != want_target {
                    mismatches.push(format!("{mode}/{s_f2p}/{s_p2f}/{band}"));
                }
                let edge = next.perch_target != sup.perch_target;
                let allowed = matches!(
                    (mode, next.mode),
                    (Mode::F, Mode::F2P) | (Mode::P2F, Mode::F)
                );
                if edge && !allowed {
                    bad_edges += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    CriterionResult::new(
        1,
        "mode machine table",
        cases == 48 && mismatches.is_empty() && bad_edges == 0 && secs < 1.0,
        format!(
            "{cases} cases, {} mismatches, {bad_edges} stray eta_d edges, {secs:.3} s (limit 1 s)",
            mismatches.len()
        ),
    )
}

// 2 ------------------------------------------------------------------------

fn hover_trim(params: &VehicleParams) -> ActuatorState {
    let alloc = Allocator::new(params.geometry.clone(), params.max_thrust)
        .expect("default geometry has full rank");
    ActuatorState::from_command(
        &alloc.allocate(&Wrench::new(params.weight(), Vec3::zeros()), &[0.0; 4]),
    )
}

fn far_wall() -> WallModel {
    WallModel {
        point: Vec3::new(1e3, 0.0, 0.0),
        ..WallModel::default()
    }
}

pub fn estimator_law() -> CriterionResult {
    let params = VehicleParams::default();
    let act = hover_trim(&params);
    let wall = far_wall();
    let contact = ContactState::detached(1e3);
    let force = Vec3::new(0.0, 0.0, -5.0);
    let dist = Disturbances {
        force,
        ..Default::default()
    };
    let dt = 1e-3;
    let mut state = VehicleState::at_rest(Vec3::new(0.0, 0.0, 100.0), Rotation::identity());
    let mut est = EstimatorState::new(Matrix3::identity() * 20.0, &state.velocity, params.mass);
    let applied_body = act.body_wrench(&params).force;
    let mut worst: f64 = 0.0;
    for k in 0..=300 {
        let t = k as f64 * dt;
        let err = (force - est.estimate).norm();
        worst = worst.max((err - 5.0 * (-20.0 * t).exp()).abs());
        let applied = state.rotation.apply(&applied_body);
        state = match integrate(&state, &act, &dist, &contact, &wall, &params, dt) {
            Ok(s) => s,
            Err(e) => return CriterionResult::new(2, "estimator law", false, e.to_string()),
        };
        est = est.step(&state.velocity, &applied, params.mass, params.gravity, dt);
    }
    let tol = 0.02 * 5.0;
    CriterionResult::new(
        2,
        "estimator law",
        worst <= tol,
        format!("max |err - 5 e^(-20 t)| = {worst:.4} N over [0, 0.3] s (limit {tol} N)"),
    )
}

// 3 ------------------------------------------------------------------------

fn perched_config(variant: Variant) -> ScenarioConfig {
    ScenarioConfig {
        variant,
        start: StartCondition::Perched,
        mission: Mission::Hover,
        events: Vec::new(),
        // one extra tick so the log spans the full 10 s
        duration: 10.001,
        ..ScenarioConfig::default()
    }
}

pub fn freeze_semantics() -> CriterionResult {
    let frozen = run_scenario(&perched_config(Variant::Proposed)).expect("valid scenario");
    let first = frozen.records[0].disturbance_estimate;
    let constant = frozen.records.iter().all(|r| {
        r.disturbance_estimate
            .iter()
            .zip(first.iter())
            .all(|(a, b)| a.to_bits() == b.to_bits())
    });
    let all_attached = frozen.records.iter().all(|r| r.attached);
    let span = frozen.records.last().map_or(0.0, |r| r.t);

    let mut nf_cfg = perched_config(Variant::NoFreeze);
    nf_cfg.duration = 3.0;
    let growing = run_scenario(&nf_cfg).expect("valid scenario");
    let norms: Vec<(f64, f64)> = growing
        .records
        .iter()
        .map(|r| (r.t, r.disturbance_estimate.norm()))
        .collect();
    let monotone = norms.windows(2).all(|w| w[1].1 >= w[0].1);
    let crossing = norms.iter().find(|(_, n)| *n > 5.0).map(|(t, _)| *t);
    let passed =
        constant && all_attached && span >= 10.0 && monotone && crossing.is_some_and(|t| t <= 3.0);
    CriterionResult::new(
        3,
        "freeze semantics",
        passed,
        format!(
            "frozen estimate bitwise constant over {span:.3} s: {constant}; no-freeze |dhat| monotone: {monotone}, exceeds 5 N at {} s (limit 3 s)",
            crossing.map_or("never".to_string(), |t| format!("{t:.3}"))
        ),
    )
}

// 4 ------------------------------------------------------------------------

/// Minimum-norm solution of `A x = w` from the KKT system, solved by LU.
fn kkt_min_norm(a: &SMatrix<f64, 6, 8>, w: &SVector<f64, 6>) -> Option<DVector<f64>> {
    let mut k = DMatrix::<f64>::zeros(14, 14);
    for i in 0..8 {
        k[(i, i)] = 1.0;
    }
    for r in 0..6 {
        for c in 0..8 {
            k[(8 + r, c)] = a[(r, c)];
            k[(c, 8 + r)] = a[(r, c)];
        }
    }
    let mut rhs = DVector::<f64>::zeros(14);
    for r in 0..6 {
        rhs[8 + r] = w[r];
    }
    k.lu().solve(&rhs).map(|x| x.rows(0, 8).into_owned())
}

fn random_in_ball(rng: &mut ChaCha8Rng, radius: f64) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if v.norm() <= 1.0 {
            return v * radius;
        }
    }
}

pub fn allocation_round_trip() -> CriterionResult {
    let params = VehicleParams::default();
    let alloc = Allocator::new(params.geometry.clone(), params.max_thrust).expect("full rank");
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_trip, mut worst_oracle): (f64, f64) = (0.0, 0.0);
    let mut saturated = 0;
    for _ in 0..1000 {
        let w = Wrench::new(
            random_in_ball(&mut rng, 10.0),
            random_in_ball(&mut rng, 0.5),
        );
        let cmd = alloc.allocate(&w, &[0.0; 4]);
        if cmd.any_saturated() {
            saturated += 1;
        }
        let back = forward_wrench(&params.geometry, &cmd.thrust, &cmd.tilt);
        worst_trip = worst_trip.max((back.as_vector() - w.as_vector()).norm());
        match kkt_min_norm(alloc.matrix(), &w.as_vector()) {
            Some(x) => {
                let ours = alloc.decompose(&w);
                let diff = (0..8).map(|i| (ours[i] - x[i]).abs()).fold(0.0, f64::max);
                worst_oracle = worst_oracle.max(diff);
            }
            None => worst_oracle = f64::INFINITY,
        }
    }
    CriterionResult::new(
        4,
        "allocation round trip",
        saturated == 0 && worst_trip <= 1e-9 && worst_oracle <= 1e-8,
        format!("1000 wrenches, reconstruction error {worst_trip:.2e} (limit 1e-9), KKT oracle gap {worst_oracle:.2e} (limit 1e-8), {saturated} saturated"),
    )
}

// 5 ------------------------------------------------------------------------

pub fn pitched_hover() -> CriterionResult {
    let mut cfg = ScenarioConfig {
        mission: Mission::Hover,
        events: Vec::new(),
        start_offset: Vec3::new(0.1, 0.0, 0.0),
        duration: 6.0,
        ..ScenarioConfig::default()
    };
    cfg.plan.hover_pitch = FRAC_PI_2;
    let run = run_scenario(&cfg).expect("valid scenario");
    let last_bad = run
        .records
        .iter()
        .rposition(|r| r.position_error >= 0.01 || r.attitude_error >= 0.01)
        .map(|i| run.records[(i + 1).min(run.records.len() - 1)].t);
    let converged_at = last_bad.unwrap_or(0.0);
    let saturated = run.records.iter().filter(|r| r.any_saturated()).count();
    let pitch_end = run.records.last().map_or(0.0, |r| r.pitch);
    CriterionResult::new(
        5,
        "90 degree pitch hover",
        run.outcome.is_completed() && converged_at <= 5.0 && saturated == 0,
        format!("within 0.01 m / 0.01 rad from t = {converged_at:.3} s (limit 5 s), final pitch {pitch_end:.4} rad, {saturated} saturated ticks"),
    )
}

// 6 ------------------------------------------------------------------------

/// Jerk cost of the best piecewise-constant-jerk profile on `n` equal
/// intervals meeting the same boundary conditions, per axis, solved in
/// closed form as a minimum-norm problem.
pub fn collocation_jerk_cost(start: &Boundary, end: &Boundary, duration: f64, n: usize) -> f64 {
    let h = duration / n as f64;
    let t = duration;
    // final [a, v, p] as linear functions of the interval jerks
    let mut c = DMatrix::<f64>::zeros(3, n);
    for k in 0..n {
        let (s0, s1) = (k as f64 * h, (k + 1) as f64 * h);
        c[(0, k)] = h;
        c[(1, k)] = ((t - s0).powi(2) - (t - s1).powi(2)) / 2.0;
        c[(2, k)] = ((t - s0).powi(3) - (t - s1).powi(3)) / 6.0;
    }
    let cct = &c * c.transpose();
    let Some(cct_inv) = cct.try_inverse() else {
        return f64::INFINITY;
    };
    (0..3)
        .map(|i| {
            let (p0, v0, a0) = (start.position[i], start.velocity[i], start.acceleration[i]);
            let d = DVector::from_vec(vec![
                end.acceleration[i] - a0,
                end.velocity[i] - v0 - a0 * t,
                end.position[i] - p0 - v0 * t - a0 * t * t / 2.0,
            ]);
            let j = c.transpose() * (&cct_inv * d);
            h * j.norm_squared()
        })
        .sum()
}

pub fn trajectory_optimality() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut rand_vec = |s: f64| {
        Vec3::new(
            rng.random_range(-s..s),
            rng.random_range(-s..s),
            rng.random_range(-s..s),
        )
    };
    let (mut worst_ratio, mut worst_excess): (f64, f64) = (0.0, f64::NEG_INFINITY);
    let (mut worst_boundary, mut worst_fd): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let start = Boundary {
            position: rand_vec(2.0),
            velocity: rand_vec(1.0),
            acceleration: rand_vec(1.0),
        };
        let end = Boundary {
            position: rand_vec(2.0),
            velocity: rand_vec(1.0),
            acceleration: rand_vec(1.0),
        };
        let duration = 1.0 + rand_vec(1.0).x.abs() * 3.0;
        let seg = match min_jerk_segment(&start, &end, duration) {
            Ok(s) => s,
            Err(e) => {
                return CriterionResult::new(6, "trajectory optimality", false, e.to_string())
            }
        };
        let ours = seg.jerk_cost();
        let oracle = collocation_jerk_cost(&start, &end, duration, 200);
        worst_ratio = worst_ratio.max((ours - oracle).abs() / oracle.max(1e-12));
        worst_excess = worst_excess.max(ours / oracle.max(1e-12) - 1.0);
        for (b, t) in [(&start, 0.0), (&end, duration)] {
            let [p, v, a, _] = seg.evaluate(t);
            worst_boundary = worst_boundary
                .max((p - b.position).norm())
                .max((v - b.velocity).norm())
                .max((a - b.acceleration).norm());
        }

        let from = Setpoint {
            position: start.position,
            velocity: start.velocity,
            acceleration: start.acceleration,
            rotation: exp_so3(&rand_vec(1.0)),
            angular_velocity: rand_vec(0.5),
        };
        let to = Setpoint::hold(end.position, exp_so3(&rand_vec(1.0)));
        let Ok(segment) = Segment::between(&from, &to, 0.0, duration) else {
            continue;
        };
        let (r_end, _) = segment.rotation.evaluate(duration * (1.0 - 1e-15));
        worst_boundary = worst_boundary.max((r_end.matrix() - to.rotation.matrix()).norm());
        let mut plan = Plan::hold(from);
        plan.push(segment);
        let h = 1e-4;
        for s in [0.13, 0.5, 0.87] {
            let t = s * duration;
            let (b, a, m) = (
                plan.sample(t - h / 2.0),
                plan.sample(t + h / 2.0),
                plan.sample(t),
            );
            let v_fd = (a.position - b.position) / h;
            let w_fd = log_so3(&b.rotation.transpose().compose(&a.rotation)) / h;
            worst_fd = worst_fd
                .max((v_fd - m.velocity).norm())
                .max((w_fd - m.angular_velocity).norm());
        }
    }
    CriterionResult::new(
        6,
        "trajectory optimality",
        worst_excess <= 0.01 && worst_ratio <= 0.01 && worst_boundary <= 1e-9 && worst_fd <= 1e-5,
        format!(
            "jerk cost vs 200-interval collocation: max excess {worst_excess:.2e}, max rel gap {worst_ratio:.2e} (limit 1%); boundary error {worst_boundary:.1e} (limit 1e-9); derivative mismatch {worst_fd:.1e} (limit 1e-5)"
        ),
    )
}

// 7-10 ---------------------------------------------------------------------

fn signal_time(run: &RunOutput, name: &str) -> Option<f64> {
    run.events
        .iter()
        .find(|e| e.kind.detail() == name)
        .map(|e| e.t)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"))
}

pub fn full_pipeline(run: &RunOutput, seconds: f64) -> CriterionResult {
    let m = &run.metrics;
    let s_f2p = signal_time(run, "S_f2p");
    let perch_delay = m.perch_time.zip(s_f2p).map(|(p, s)| p - s);
    let passed = run.outcome.is_completed()
        && m.perch_achieved
        && perch_delay.is_some_and(|d| d <= 30.0)
        && m.unperch_achieved
        && m.min_clearance.is_some_and(|c| c > 0.05)
        && m.z_drop.is_some_and(|z| z < 0.2)
        && m.settling_time.is_some_and(|s| s <= 5.0)
        && seconds < 60.0;
    CriterionResult::new(
        7,
        "full pipeline",
        passed,
        format!(
            "perched {} s after S_f2p (limit 30), released at {} s, min_clearance {} m (> 0.05), z_drop {} m (< 0.2), settled {} s after release (limit 5), run took {seconds:.2} s (limit 60)",
            fmt_opt(perch_delay),
            fmt_opt(m.release_time),
            fmt_opt(m.min_clearance),
            fmt_opt(m.z_drop),
            fmt_opt(m.settling_time)
        ),
    )
}

pub fn drop_ablation(proposed: &RunOutput, ablated: &RunOutput) -> CriterionResult {
    let (a, b) = (proposed.metrics.z_drop, ablated.metrics.z_drop);
    let passed = matches!((a, b), (Some(a), Some(b)) if b >= 2.0 * a && b > 0.0);
    CriterionResult::new(
        8,
        "drop ablation (no transitions, rho = 0)",
        passed,
        format!(
            "z_drop {} m vs proposed {} m (need >= 2x)",
            fmt_opt(b),
            fmt_opt(a)
        ),
    )
}

pub fn collision_ablation(proposed: &RunOutput, ablated: &RunOutput) -> CriterionResult {
    let (a, b) = (
        proposed.metrics.min_clearance,
        ablated.metrics.min_clearance,
    );
    let passed = b.is_some_and(|b| b <= 0.0) && a.is_some_and(|a| a > 0.05);
    CriterionResult::new(
        9,
        "collision ablation (no transitions, rho = 0.5)",
        passed,
        format!(
            "min_clearance {} m (need <= 0) vs proposed {} m (need > 0.05)",
            fmt_opt(b),
            fmt_opt(a)
        ),
    )
}

pub fn saturation_ablation(proposed: &RunOutput, ablated: &RunOutput) -> CriterionResult {
    let (a, b) = (
        proposed.metrics.saturation_in(Mode::P),
        ablated.metrics.saturation_in(Mode::P),
    );
    CriterionResult::new(
        10,
        "saturation ablation (no freeze)",
        b > 0.2 && a == 0.0,
        format!("saturation fraction in P {b:.3} (need > 0.2) vs proposed {a:.3} (need 0)"),
    )
}

// 11 -----------------------------------------------------------------------

pub fn determinism(first: &RunOutput) -> CriterionResult {
    let again = run_scenario(&ScenarioConfig::default()).expect("valid scenario");
    let (a, b) = (to_csv(&first.records), to_csv(&again.records));
    let hash = sha256_hex(a.as_bytes());
    let golden = GOLDEN_DEFAULT_CSV_SHA256.trim();
    CriterionResult::new(
        11,
        "determinism",
        a == b && hash == golden,
        format!(
            "repeat run byte-identical: {}; sha256 {hash} vs golden {golden}",
            a == b
        ),
    )
}

// 12 -----------------------------------------------------------------------

pub fn physics_sanity() -> CriterionResult {
    let params = VehicleParams {
        gravity: 0.0,
        ..VehicleParams::default()
    };
    let wall = far_wall();
    let contact = ContactState::detached(1e3);
    let act = ActuatorState::default();
    let dist = Disturbances::default();
    let mut state = VehicleState {
        position: Vec3::zeros(),
        velocity: Vec3::new(0.3, -0.2, 0.1),
        rotation: Rotation::identity(),
        angular_velocity: Vec3::new(2.0, -1.0, 3.0),
    };
    let e0 = state.kinetic_energy(&params);
    let mut worst_energy: f64 = 0.0;
    let mut worst_ortho: f64 = 0.0;
    for k in 1..=1_000_000u32 {
        state = match integrate(&state, &act, &dist, &contact, &wall, &params, 1e-3) {
            Ok(s) => s,
            Err(e) => return CriterionResult::new(12, "physics sanity", false, e.to_string()),
        };
        if k <= 10_000 {
            worst_energy = worst_energy.max((state.kinetic_energy(&params) - e0).abs() / e0);
        }
        if k % 1000 == 0 {
            worst_ortho = worst_ortho.max(state.rotation.orthonormality_error());
        }
    }
    worst_ortho = worst_ortho.max(state.rotation.orthonormality_error());
    CriterionResult::new(
        12,
        "physics sanity",
        worst_energy <= 1e-6 && worst_ortho < 1e-8,
        format!("relative energy drift over 10 s {worst_energy:.2e} (limit 1e-6); orthonormality error over 1e6 steps {worst_ortho:.2e} (limit 1e-8)"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collocation_oracle_matches_rest_to_rest_cost() {
        // rest-to-rest over 1 s by 1 m: cost 720
        let start = Boundary::at_rest(Vec3::zeros());
        let end = Boundary::at_rest(Vec3::new(1.0, 0.0, 0.0));
        let c = collocation_jerk_cost(&start, &end, 1.0, 200);
        assert!((720.0..720.0 * 1.001).contains(&c), "{c}");
        assert!((min_jerk_segment(&start, &end, 1.0).unwrap().jerk_cost() - 720.0).abs() < 1e-9);
    }

    #[test]
    fn transition_table_has_48_cases() {
        assert!(mode_table().passed);
    }

    #[test]
    fn kkt_oracle_reproduces_constraint() {
        let params = VehicleParams::default();
        let alloc = Allocator::new(params.geometry.clone(), params.max_thrust).unwrap();
        let w = SVector::<f64, 6>::from_column_slice(&[1.0, -2.0, 15.0, 0.1, 0.0, -0.05]);
        let x = kkt_min_norm(alloc.matrix(), &w).unwrap();
        let x8 = SVector::<f64, 8>::from_iterator(x.iter().copied());
        assert!((alloc.matrix() * x8 - w).norm() < 1e-12);
    }
}
