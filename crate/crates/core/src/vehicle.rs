//! Rigid-body tiltrotor plant: translational/rotational dynamics, actuator
//! lag and rate limits, injected disturbances and the magnetic wall contact.

use nalgebra::Matrix3;

use crate::allocation::{forward_wrench, ActuatorCommand, RotorGeometry};
use crate::error::SimulationError;
use crate::geometry::{b3, exp_so3, hat, Rotation, Vec3};

/// Perch-servo position at or above which the magnets are fully engaged.
pub const ETA_ENGAGED: f64 = 0.95;
/// Perch-servo position at or below which the magnets have peeled off.
pub const ETA_RELEASED: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleParams {
    pub mass: f64,
    pub inertia: Matrix3<f64>,
    pub gravity: f64,
    pub geometry: RotorGeometry,
    pub max_thrust: f64,
    /// First-order rotor thrust time constant (s).
    pub rotor_time_constant: f64,
    /// Tilt-servo slew limit (rad/s).
    pub tilt_rate_limit: f64,
    /// Perch-servo full travel time (s).
    pub perch_travel_time: f64,
}

impl Default for VehicleParams {
    fn default() -> Self {
        Self {
            mass: 1.65,
            inertia: Matrix3::from_diagonal(&Vec3::new(8e-3, 8e-3, 1.4e-2)),
            gravity: 9.81,
            geometry: RotorGeometry::x_config(0.13, 0.016),
            max_thrust: 8.0,
            rotor_time_constant: 0.05,
            tilt_rate_limit: 8.0,
            perch_travel_time: 0.2,
        }
    }
}

impl VehicleParams {
    pub fn weight(&self) -> Vec3 {
        b3() * (self.mass * self.gravity)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.mass > 0.0) {
            return Err(format!("mass must be positive, got {}", self.mass));
        }
        let j = &self.inertia;
        if (j - j.transpose()).norm() > 1e-12 || j.cholesky().is_none() {
            return Err("inertia must be symmetric positive definite".into());
        }
        if !(self.max_thrust > 0.0) || !(self.rotor_time_constant > 0.0) {
            return Err("max_thrust and rotor_time_constant must be positive".into());
        }
        if !(self.tilt_rate_limit > 0.0) || !(self.perch_travel_time > 0.0) {
            return Err("tilt_rate_limit and perch_travel_time must be positive".into());
        }
        if self.geometry.spin.iter().sum::<f64>().abs() > 1e-12 {
            return Err("rotor spin directions must cancel".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleState {
    /// World position (m).
    pub position: Vec3,
    /// World velocity (m/s).
    pub velocity: Vec3,
    pub rotation: Rotation,
    /// Body angular velocity (rad/s).
    pub angular_velocity: Vec3,
}

impl VehicleState {
    pub fn at_rest(position: Vec3, rotation: Rotation) -> Self {
        Self {
            position,
            velocity: Vec3::zeros(),
            rotation,
            angular_velocity: Vec3::zeros(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().all(|c| c.is_finite())
            && self.velocity.iter().all(|c| c.is_finite())
            && self.angular_velocity.iter().all(|c| c.is_finite())
            && self.rotation.matrix().iter().all(|c| c.is_finite())
    }

    pub fn kinetic_energy(&self, params: &VehicleParams) -> f64 {
        let w = self.angular_velocity;
        0.5 * params.mass * self.velocity.norm_squared() + 0.5 * w.dot(&(params.inertia * w))
    }
}

/// Measured actuator positions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ActuatorState {
    pub thrust: [f64; 4],
    pub tilt: [f64; 4],
    /// Perch servo, normalized: 0 = unperch, 1 = perch.
    pub perch: f64,
}

impl ActuatorState {
    /// Actuators sitting exactly on a command.
    pub fn from_command(cmd: &ActuatorCommand) -> Self {
        Self {
            thrust: cmd.thrust,
            tilt: cmd.tilt,
            perch: cmd.perch_target,
        }
    }

    pub fn body_wrench(&self, params: &VehicleParams) -> crate::allocation::Wrench {
        forward_wrench(&params.geometry, &self.thrust, &self.tilt)
    }
}

/// Injected external effects. `force` is in the world frame (N), `angular`
/// is a body angular acceleration (rad/s²).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Disturbances {
    pub force: Vec3,
    pub angular: Vec3,
}

/// Flat ferromagnetic wall and the vehicle's magnet interface.
#[derive(Debug, Clone, PartialEq)]
pub struct WallModel {
    pub point: Vec3,
    /// Unit normal pointing into free space.
    pub normal: Vec3,
    /// Normal pull-off capacity of the engaged magnets (N).
    pub magnet_capacity: f64,
    /// Range of the near-field attraction (m).
    pub magnet_range: f64,
    pub attach_tolerance: f64,
    /// Magnet face position in the body frame (m).
    pub magnet_offset: Vec3,
    /// Penalty stiffness (N/m) and damping (N·s/m) against penetration while detached.
    pub contact_stiffness: f64,
    pub contact_damping: f64,
}

impl Default for WallModel {
    fn default() -> Self {
        Self {
            point: Vec3::new(1.0, 0.0, 1.5),
            normal: Vec3::new(-1.0, 0.0, 0.0),
            magnet_capacity: 40.0,
            magnet_range: 0.05,
            attach_tolerance: 1e-3,
            magnet_offset: Vec3::new(0.0, 0.0, -0.05),
            contact_stiffness: 2000.0,
            contact_damping: 40.0,
        }
    }
}

impl WallModel {
    /// World position of the magnet face.
    pub fn interface_position(&self, state: &VehicleState) -> Vec3 {
        state.position + state.rotation.apply(&self.magnet_offset)
    }

    /// Signed distance of the magnet face from the plane, positive in free space.
    pub fn gap(&self, state: &VehicleState) -> f64 {
        self.normal
            .dot(&(self.interface_position(state) - self.point))
    }

    pub fn validate(&self) -> Result<(), String> {
        if (self.normal.norm() - 1.0).abs() > 1e-9 {
            return Err("wall normal must be a unit vector".into());
        }
        if !(self.magnet_capacity > 0.0) || !(self.magnet_range > 0.0) {
            return Err("magnet capacity and range must be positive".into());
        }
        if self.attach_tolerance < 0.0 || self.contact_stiffness < 0.0 || self.contact_damping < 0.0
        {
            return Err("attach tolerance and contact constants must be nonnegative".into());
        }
        Ok(())
    }

    /// Penalty reaction while the magnet face is behind the plane.
    pub fn penetration_force(&self, state: &VehicleState) -> Vec3 {
        let gap = self.gap(state);
        if gap >= 0.0 {
            return Vec3::zeros();
        }
        let face_velocity = state.velocity
            + state
                .rotation
                .apply(&state.angular_velocity.cross(&self.magnet_offset));
        let push =
            -self.contact_stiffness * gap - self.contact_damping * self.normal.dot(&face_velocity);
        self.normal * push.max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContactEvent {
    Attached,
    Released,
    ForcedDetach,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactState {
    pub attached: bool,
    pub gap: f64,
    /// Ground-truth normal interface force, compression positive (N).
    pub normal_force: f64,
    pub anchor: Option<(Vec3, Rotation)>,
    /// Near-field magnet attraction on the vehicle, world frame (N).
    pub nearfield_force: Vec3,
    /// Event raised by the last update, if any.
    pub event: Option<ContactEvent>,
}

impl ContactState {
    pub fn detached(gap: f64) -> Self {
        Self {
            attached: false,
            gap,
            normal_force: 0.0,
            anchor: None,
            nearfield_force: Vec3::zeros(),
            event: None,
        }
    }

    /// Attached at the given pose.
    pub fn locked(position: Vec3, rotation: Rotation) -> Self {
        Self {
            attached: true,
            gap: 0.0,
            normal_force: 0.0,
            anchor: Some((position, rotation)),
            nearfield_force: Vec3::zeros(),
            event: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub position: Vec3,
    pub velocity: Vec3,
    pub rotation: Matrix3<f64>,
    pub angular_velocity: Vec3,
}

impl StateDerivative {
    pub fn zero() -> Self {
        Self {
            position: Vec3::zeros(),
            velocity: Vec3::zeros(),
            rotation: Matrix3::zeros(),
            angular_velocity: Vec3::zeros(),
        }
    }
}

/// Continuous-time dynamics. Attached vehicles do not move.
pub fn derivative(
    state: &VehicleState,
    act: &ActuatorState,
    dist: &Disturbances,
    contact: &ContactState,
    params: &VehicleParams,
    wall: &WallModel,
) -> StateDerivative {
    if contact.attached {
        return StateDerivative::zero();
    }
    let wrench = act.body_wrench(params);
    let r = &state.rotation;
    let w = state.angular_velocity;
    let external = contact.nearfield_force + wall.penetration_force(state) + dist.force;
    let accel = (r.apply(&wrench.force) + external) / params.mass - b3() * params.gravity;
    let gyro = -w.cross(&(params.inertia * w));
    let inertia_inv = params
        .inertia
        .try_inverse()
        .unwrap_or_else(Matrix3::identity);
    StateDerivative {
        position: state.velocity,
        velocity: accel,
        rotation: r.matrix() * hat(&w),
        angular_velocity: inertia_inv * (gyro + wrench.torque) + dist.angular,
    }
}

/// Advances actuators toward `cmd` over `dt`: exact first-order lag on
/// thrust, slew-limited tilt, constant-rate perch servo.
pub fn step_actuators(
    act: &ActuatorState,
    cmd: &ActuatorCommand,
    dt: f64,
    params: &VehicleParams,
) -> ActuatorState {
    let alpha = 1.0 - (-dt / params.rotor_time_constant).exp();
    let max_step = params.tilt_rate_limit * dt;
    let mut next = *act;
    for i in 0..4 {
        let t = act.thrust[i] + (cmd.thrust[i] - act.thrust[i]) * alpha;
        next.thrust[i] = t.clamp(0.0, params.max_thrust);
        next.tilt[i] = act.tilt[i] + (cmd.tilt[i] - act.tilt[i]).clamp(-max_step, max_step);
    }
    let perch_step = dt / params.perch_travel_time;
    next.perch =
        (act.perch + (cmd.perch_target - act.perch).clamp(-perch_step, perch_step)).clamp(0.0, 1.0);
    next
}

/// Fraction of magnet holding capacity available at perch-servo position `eta`.
pub fn magnet_engagement(eta: f64) -> f64 {
    if eta >= ETA_ENGAGED {
        1.0
    } else if eta <= ETA_RELEASED {
        0.0
    } else {
        (eta - ETA_RELEASED) / (ETA_ENGAGED - ETA_RELEASED)
    }
}

/// Attach/release logic and contact force bookkeeping.
///
/// `applied_force` is the world-frame force the vehicle exerts on itself
/// apart from gravity and the wall (rotor thrust plus injected disturbance).
pub fn update_contact(
    state: &VehicleState,
    act: &ActuatorState,
    applied_force: &Vec3,
    contact: &ContactState,
    wall: &WallModel,
    params: &VehicleParams,
) -> ContactState {
    let n = wall.normal;
    if contact.attached {
        if act.perch <= ETA_RELEASED {
            let mut next = ContactState::detached(0.0);
            next.event = Some(ContactEvent::Released);
            return next;
        }
        let hold = magnet_engagement(act.perch);
        let capacity = wall.magnet_capacity * hold;
        let offset = n.dot(&(params.weight() - applied_force));
        let pull = (-offset).max(0.0);
        if pull > capacity {
            let mut next = ContactState::detached(0.0);
            next.event = Some(ContactEvent::ForcedDetach);
            return next;
        }
        return ContactState {
            attached: true,
            gap: 0.0,
            normal_force: capacity + offset,
            anchor: contact.anchor,
            nearfield_force: Vec3::zeros(),
            event: None,
        };
    }

    let gap = wall.gap(state);
    let engaged = act.perch >= ETA_ENGAGED;
    if engaged && gap <= wall.attach_tolerance {
        let anchor_position = state.position - n * gap;
        let mut next = ContactState::locked(anchor_position, state.rotation);
        next.normal_force = wall.magnet_capacity + n.dot(&(params.weight() - applied_force));
        next.event = Some(ContactEvent::Attached);
        return next;
    }
    let mut next = ContactState::detached(gap);
    if engaged && gap > 0.0 && gap < wall.magnet_range {
        next.nearfield_force = -n * (wall.magnet_capacity * (1.0 - gap / wall.magnet_range));
    }
    next
}

/// One fixed step: RK4 on translation and body rate, rotation advanced by
/// the RK4-weighted body rate through the exponential map.
pub fn integrate(
    state: &VehicleState,
    act: &ActuatorState,
    dist: &Disturbances,
    contact: &ContactState,
    wall: &WallModel,
    params: &VehicleParams,
    dt: f64,
) -> Result<VehicleState, SimulationError> {
    if contact.attached {
        return Ok(*state);
    }
    let eval = |s: &VehicleState| derivative(s, act, dist, contact, params, wall);
    let stage = |dp: &Vec3, dv: &Vec3, dw: &Vec3, rate: &Vec3, h: f64| VehicleState {
        position: state.position + dp * h,
        velocity: state.velocity + dv * h,
        rotation: state.rotation.compose(&exp_so3(&(rate * h))),
        angular_velocity: state.angular_velocity + dw * h,
    };

    let k1 = eval(state);
    let s2 = stage(
        &k1.position,
        &k1.velocity,
        &k1.angular_velocity,
        &state.angular_velocity,
        0.5 * dt,
    );
    let k2 = eval(&s2);
    let s3 = stage(
        &k2.position,
        &k2.velocity,
        &k2.angular_velocity,
        &s2.angular_velocity,
        0.5 * dt,
    );
    let k3 = eval(&s3);
    let s4 = stage(
        &k3.position,
        &k3.velocity,
        &k3.angular_velocity,
        &s3.angular_velocity,
        dt,
    );
    let k4 = eval(&s4);

    let sixth = dt / 6.0;
    let rate_eff = (state.angular_velocity
        + s2.angular_velocity * 2.0
        + s3.angular_velocity * 2.0
        + s4.angular_velocity)
        / 6.0;
    let next = VehicleState {
        position: state.position
            + (k1.position + k2.position * 2.0 + k3.position * 2.0 + k4.position) * sixth,
        velocity: state.velocity
            + (k1.velocity + k2.velocity * 2.0 + k3.velocity * 2.0 + k4.velocity) * sixth,
        rotation: state
            .rotation
            .compose(&exp_so3(&(rate_eff * dt)))
            .renormalized(),
        angular_velocity: state.angular_velocity
            + (k1.angular_velocity
                + k2.angular_velocity * 2.0
                + k3.angular_velocity * 2.0
                + k4.angular_velocity)
                * sixth,
    };
    if !next.is_finite() {
        return Err(SimulationError::NonFiniteState(format!(
            "p = {:?}, v = {:?}, w = {:?}",
            next.position.as_slice(),
            next.velocity.as_slice(),
            next.angular_velocity.as_slice()
        )));
    }
    Ok(next)
}
