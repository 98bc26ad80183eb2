//! Simulation and control stack for a fully actuated tiltrotor that perches
//! on and unperches from magnetic walls.
//!
//! The modules build bottom-up: [`geometry`] (SO(3) kernel), [`vehicle`]
//! (rigid-body, actuator and contact model), [`allocation`], [`estimation`],
//! [`control`], [`supervisor`] (mode machine), [`planner`] and [`harness`]
//! (fixed-step loop, scenarios, telemetry and metrics).

// `!(x > 0.0)` style checks are used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod control;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod harness;
pub mod planner;
pub mod supervisor;
pub mod vehicle;
pub mod verify;

pub use allocation::{ActuatorCommand, Allocator, RotorGeometry, Wrench};
pub use control::{Gains, Setpoint};
pub use error::{
    AllocationError, GeometryError, MetricsError, PlannerError, ScenarioError, SimulationError,
};
pub use geometry::{Rotation, Vec3};
pub use supervisor::{Mode, SwitchConfig, SwitchingLaw};
pub use vehicle::{VehicleParams, VehicleState, WallModel};
