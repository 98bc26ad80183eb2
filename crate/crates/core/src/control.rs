//! Wrench laws: the nominal free-flight tracking controller, the disturbance
//! rejection term and the perched wrench.

use nalgebra::Matrix3;

use crate::allocation::Wrench;
use crate::estimation::EstimatorState;
use crate::geometry::{b3, rotation_error, Rotation, Vec3};
use crate::vehicle::{VehicleParams, VehicleState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gains {
    pub position: Matrix3<f64>,
    pub velocity: Matrix3<f64>,
    pub attitude: Matrix3<f64>,
    pub rate: Matrix3<f64>,
    pub attitude_integral: Matrix3<f64>,
}

impl Default for Gains {
    fn default() -> Self {
        let i = Matrix3::identity();
        Self {
            position: i * 10.0,
            velocity: i * 6.0,
            attitude: i * 60.0,
            rate: i * 15.0,
            attitude_integral: i * 3.0,
        }
    }
}

impl Gains {
    pub fn validate(&self) -> Result<(), String> {
        for (name, k) in [
            ("position", &self.position),
            ("velocity", &self.velocity),
            ("attitude", &self.attitude),
            ("rate", &self.rate),
            ("attitude_integral", &self.attitude_integral),
        ] {
            if (k - k.transpose()).norm() > 1e-12 || k.cholesky().is_none() {
                return Err(format!("{name} gain must be symmetric positive definite"));
            }
        }
        Ok(())
    }
}

/// Desired pose and rates. `angular_velocity` is in the desired body frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setpoint {
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
    pub rotation: Rotation,
    pub angular_velocity: Vec3,
}

impl Setpoint {
    pub fn hold(position: Vec3, rotation: Rotation) -> Self {
        Self {
            position,
            velocity: Vec3::zeros(),
            acceleration: Vec3::zeros(),
            rotation,
            angular_velocity: Vec3::zeros(),
        }
    }
}

/// Clamped running integral of the attitude error (rad·s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttitudeIntegral {
    pub value: Vec3,
    pub bound: f64,
}

impl AttitudeIntegral {
    pub fn new(bound: f64) -> Self {
        Self {
            value: Vec3::zeros(),
            bound,
        }
    }

    pub fn reset(&self) -> Self {
        Self::new(self.bound)
    }

    fn accumulate(&self, e: &Vec3, dt: f64) -> Self {
        let b = self.bound;
        Self {
            value: (self.value + e * dt).map(|c| c.clamp(-b, b)),
            bound: b,
        }
    }
}

impl Default for AttitudeIntegral {
    fn default() -> Self {
        Self::new(0.5)
    }
}

/// Tracking errors, returned alongside the wrench for logging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingError {
    pub position: Vec3,
    pub attitude: Vec3,
}

/// Nominal controller: gravity feedforward plus PD in translation and PID on
/// the SO(3) log error in rotation.
pub fn nominal_wrench(
    state: &VehicleState,
    sp: &Setpoint,
    gains: &Gains,
    integ: &AttitudeIntegral,
    params: &VehicleParams,
    dt: f64,
) -> (Wrench, AttitudeIntegral, TrackingError) {
    let r = &state.rotation;
    let e_p = sp.position - state.position;
    let e_v = sp.velocity - state.velocity;
    let world =
        b3() * params.gravity + gains.position * e_p + gains.velocity * e_v + sp.acceleration;
    let force = r.apply_inverse(&world) * params.mass;

    let psi = r.transpose().compose(&sp.rotation);
    let e_r = rotation_error(r, &sp.rotation);
    let e_w = psi.apply(&sp.angular_velocity) - state.angular_velocity;
    let integ = integ.accumulate(&e_r, dt);
    let torque = params.inertia
        * (gains.attitude * e_r + gains.rate * e_w + gains.attitude_integral * integ.value);

    (
        Wrench::new(force, torque),
        integ,
        TrackingError {
            position: e_p,
            attitude: e_r,
        },
    )
}

/// Body-frame force cancelling the estimated external force.
pub fn rejection_force(est: &EstimatorState, rotation: &Rotation) -> Vec3 {
    -rotation.apply_inverse(&est.estimate)
}

/// Perched wrench: a fraction `rho` of the weight lifted in the world frame,
/// no torque. `rho = 0` is the zero wrench.
pub fn perch_wrench(rho: f64, state: &VehicleState, params: &VehicleParams) -> Wrench {
    let force = state.rotation.apply_inverse(&b3()) * (rho * params.mass * params.gravity);
    Wrench::new(force, Vec3::zeros())
}
