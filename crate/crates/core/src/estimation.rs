//! Momentum-based external force observer.
//!
//! The estimate is `K_e (m v − p₀ − ∫(R f − m g b3 + Δ̂) dt)`; against a
//! constant external force it converges as a first-order lag with rate
//! `K_e`. Two instances run in the loop: one feeds disturbance rejection and
//! is frozen around perching, the other reads the wall-normal contact force.

use nalgebra::Matrix3;

use crate::geometry::{b3, Vec3};
use crate::vehicle::{VehicleParams, VehicleState, WallModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorState {
    /// Estimated world-frame external force (N).
    pub estimate: Vec3,
    /// Running integral of `R f − m g b3 + Δ̂` (N·s).
    pub accumulator: Vec3,
    /// Momentum reference (kg·m/s).
    pub initial_momentum: Vec3,
    /// Observer gain (1/s).
    pub gain: Matrix3<f64>,
    pub frozen: bool,
}

impl EstimatorState {
    /// Fresh estimator referenced to the current momentum.
    pub fn new(gain: Matrix3<f64>, velocity: &Vec3, mass: f64) -> Self {
        Self {
            estimate: Vec3::zeros(),
            accumulator: Vec3::zeros(),
            initial_momentum: velocity * mass,
            gain,
            frozen: false,
        }
    }

    /// Same as [`new`](Self::new) but keeping this instance's gain.
    pub fn restarted(&self, velocity: &Vec3, mass: f64) -> Self {
        Self::new(self.gain, velocity, mass)
    }

    /// One explicit-Euler step given the world-frame applied force `R f`.
    pub fn step(
        &self,
        velocity: &Vec3,
        applied_world_force: &Vec3,
        mass: f64,
        gravity: f64,
        dt: f64,
    ) -> Self {
        if self.frozen {
            return *self;
        }
        let accumulator =
            self.accumulator + (applied_world_force - b3() * (mass * gravity) + self.estimate) * dt;
        let estimate = self.gain * (velocity * mass - self.initial_momentum - accumulator);
        Self {
            estimate,
            accumulator,
            ..*self
        }
    }
}

/// Estimator update with the body-frame applied force `f_body`.
pub fn update(
    est: &EstimatorState,
    state: &VehicleState,
    f_body: &Vec3,
    params: &VehicleParams,
    dt: f64,
) -> EstimatorState {
    let world = state.rotation.apply(f_body);
    est.step(&state.velocity, &world, params.mass, params.gravity, dt)
}

pub fn freeze(est: &EstimatorState) -> EstimatorState {
    EstimatorState {
        frozen: true,
        ..*est
    }
}

/// Resumes updates. The momentum reference is re-based to `velocity` so the
/// held estimate carries over without a jump.
pub fn unfreeze(est: &EstimatorState, velocity: &Vec3, mass: f64) -> EstimatorState {
    if !est.frozen {
        return *est;
    }
    let held = est
        .gain
        .try_inverse()
        .map(|k| k * est.estimate)
        .unwrap_or_else(Vec3::zeros);
    EstimatorState {
        accumulator: Vec3::zeros(),
        initial_momentum: velocity * mass - held,
        frozen: false,
        ..*est
    }
}

/// Wall-normal component of the estimated external force: positive when the
/// wall pushes the vehicle out along `n`, negative under tension.
pub fn contact_normal_force(est: &EstimatorState, wall: &WallModel) -> f64 {
    wall.normal.dot(&est.estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::{Allocator, Wrench};
    use crate::geometry::Rotation;
    use crate::vehicle::{integrate, ActuatorState, ContactState, Disturbances};

    fn gain() -> Matrix3<f64> {
        Matrix3::identity() * 20.0
    }

    fn hover_setup() -> (VehicleParams, ActuatorState, Vec3) {
        let params = VehicleParams::default();
        let alloc = Allocator::new(params.geometry.clone(), params.max_thrust).unwrap();
        let cmd = alloc.allocate(&Wrench::new(params.weight(), Vec3::zeros()), &[0.0; 4]);
        let act = ActuatorState::from_command(&cmd);
        let f = act.body_wrench(&params).force;
        (params, act, f)
    }

    fn far_wall() -> WallModel {
        WallModel {
            point: Vec3::new(100.0, 0.0, 0.0),
            ..WallModel::default()
        }
    }

    #[test]
    fn balanced_hover_keeps_zero_estimate() {
        let (params, _, f) = hover_setup();
        let state = VehicleState::at_rest(Vec3::zeros(), Rotation::identity());
        let mut est = EstimatorState::new(gain(), &state.velocity, params.mass);
        for _ in 0..1000 {
            est = update(&est, &state, &f, &params, 1e-3);
        }
        assert!(est.estimate.norm() < 1e-9);
    }

    /// Runs the observer against the integrated plant under a world force step.
    fn step_response(force: Vec3, seconds: f64) -> Vec<(f64, Vec3)> {
        let (params, act, f) = hover_setup();
        let wall = far_wall();
        let dist = Disturbances {
            force,
            ..Default::default()
        };
        let contact = ContactState::detached(1.0);
        let dt = 1e-3;
        let mut state = VehicleState::at_rest(Vec3::new(0.0, 0.0, 50.0), Rotation::identity());
        let mut est = EstimatorState::new(gain(), &state.velocity, params.mass);
        let mut out = vec![(0.0, est.estimate)];
        let steps = (seconds / dt).round() as usize;
        for k in 1..=steps {
            let applied = state.rotation.apply(&f);
            state = integrate(&state, &act, &dist, &contact, &wall, &params, dt).unwrap();
            est = est.step(&state.velocity, &applied, params.mass, params.gravity, dt);
            out.push((k as f64 * dt, est.estimate));
        }
        out
    }

    #[test]
    fn step_disturbance_first_order_response() {
        let trace = step_response(Vec3::new(0.0, 0.0, -5.0), 0.15);
        let (_, last) = trace.last().unwrap();
        let expected = -5.0 * (1.0 - (-3.0f64).exp());
        assert!(
            (last.z - expected).abs() < 0.01 * expected.abs(),
            "{} vs {expected}",
            last.z
        );
    }

    #[test]
    fn error_decays_exponentially() {
        let trace = step_response(Vec3::new(3.0, -2.0, 1.0), 0.3);
        let truth = Vec3::new(3.0, -2.0, 1.0);
        for (t, est) in trace {
            let err = (truth - est).norm();
            let model = truth.norm() * (-20.0 * t).exp();
            assert!(
                (err - model).abs() < 0.02 * truth.norm(),
                "t={t}: {err} vs {model}"
            );
        }
    }

    #[test]
    fn frozen_estimator_ignores_updates() {
        let (params, _, _) = hover_setup();
        let state = VehicleState::at_rest(Vec3::zeros(), Rotation::identity());
        let mut est = EstimatorState::new(gain(), &state.velocity, params.mass);
        est.estimate = Vec3::new(1.0, -2.0, 0.5);
        let frozen = freeze(&est);
        let mut e = frozen;
        for _ in 0..1000 {
            e = update(&e, &state, &Vec3::new(3.0, 0.0, 40.0), &params, 1e-3);
        }
        assert_eq!(e, frozen);
        assert_eq!(freeze(&frozen), frozen);
    }

    #[test]
    fn unfreeze_is_continuous_in_hover() {
        let (params, _, f) = hover_setup();
        let mut state = VehicleState::at_rest(Vec3::zeros(), Rotation::identity());
        state.velocity = Vec3::new(0.2, 0.0, 0.0);
        let mut est = EstimatorState::new(gain(), &state.velocity, params.mass);
        est.estimate = Vec3::new(0.7, 0.0, -0.3);
        let frozen = freeze(&est);
        let resumed = unfreeze(&frozen, &state.velocity, params.mass);
        assert_eq!(resumed.estimate, frozen.estimate);
        // the next step only moves by K_e·dt·(Δ − Δ̂), not by a re-referencing jump
        let applied = state.rotation.apply(&f) - frozen.estimate;
        let next = resumed.step(&state.velocity, &applied, params.mass, params.gravity, 1e-3);
        assert!((next.estimate - frozen.estimate).norm() < 1e-9);
    }

    #[test]
    fn contact_force_sign() {
        let wall = WallModel {
            normal: Vec3::new(-1.0, 0.0, 0.0),
            ..WallModel::default()
        };
        let mut est = EstimatorState::new(gain(), &Vec3::zeros(), 1.0);
        est.estimate = Vec3::new(-3.0, 0.0, 0.0);
        assert_eq!(contact_normal_force(&est, &wall), 3.0);
        est.estimate = Vec3::zeros();
        assert_eq!(contact_normal_force(&est, &wall), 0.0);
    }

    #[test]
    fn locked_press_is_read_as_contact_force() {
        let (params, _, _) = hover_setup();
        let wall = WallModel::default();
        let state = VehicleState::at_rest(Vec3::new(0.95, 0.0, 1.5), Rotation::identity());
        // hover thrust plus 2 N pushed into the wall (−n)
        let applied = params.weight() - wall.normal * 2.0;
        let mut est = EstimatorState::new(gain(), &state.velocity, params.mass);
        for _ in 0..500 {
            est = est.step(&state.velocity, &applied, params.mass, params.gravity, 1e-3);
        }
        assert!((contact_normal_force(&est, &wall) - 2.0).abs() < 0.05);
    }
}
