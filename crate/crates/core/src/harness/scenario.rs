//! Scenario description and its TOML file format.
//!
//! Every section and key is optional; missing values take the defaults of
//! the default perch/unperch experiment. The `format` and `version` keys are
//! required so that stale files fail loudly.

use std::path::Path;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::allocation::{diag, Allocator, RotorGeometry};
use crate::control::Gains;
use crate::error::ScenarioError;
use crate::geometry::Vec3;
use crate::planner::PerchPlanConfig;
use crate::supervisor::{SwitchConfig, SwitchingLaw};
use crate::vehicle::{VehicleParams, WallModel};

pub const FORMAT_TAG: &str = "tiltperch-scenario";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "proposed")]
    Proposed,
    #[serde(rename = "no-transitions-rho0")]
    NoTransitionsRho0,
    #[serde(rename = "no-transitions-rho0.5")]
    NoTransitionsRhoHalf,
    #[serde(rename = "no-freeze")]
    NoFreeze,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Proposed,
        Variant::NoTransitionsRho0,
        Variant::NoTransitionsRhoHalf,
        Variant::NoFreeze,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Proposed => "proposed",
            Variant::NoTransitionsRho0 => "no-transitions-rho0",
            Variant::NoTransitionsRhoHalf => "no-transitions-rho0.5",
            Variant::NoFreeze => "no-freeze",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    pub fn law(self) -> SwitchingLaw {
        match self {
            Variant::Proposed => SwitchingLaw::WithTransitions,
            Variant::NoTransitionsRho0 | Variant::NoTransitionsRhoHalf => {
                SwitchingLaw::WithoutTransitions
            }
            Variant::NoFreeze => SwitchingLaw::NoFreeze,
        }
    }

    /// Perched weight fraction fixed by the variant, if any.
    pub fn rho(self) -> Option<f64> {
        match self {
            Variant::NoTransitionsRho0 => Some(0.0),
            Variant::NoTransitionsRhoHalf => Some(0.5),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Signal {
    #[serde(rename = "S_f2p")]
    Perch,
    #[serde(rename = "S_p2f")]
    Unperch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorEvent {
    pub time: f64,
    pub signal: Signal,
}

/// Injected disturbance active on `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbanceWindow {
    pub start: f64,
    pub end: f64,
    /// World-frame force (N).
    #[serde(default)]
    pub force: [f64; 3],
    /// Body angular acceleration (rad/s²).
    #[serde(default)]
    pub angular: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartCondition {
    /// Hovering at the hover pose (plus `start_offset`).
    Hover,
    /// Attached to the wall in mode P, holding the pose behind the surface.
    Perched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mission {
    /// Hold the hover pose, then fly to the standoff pose.
    PerchCycle,
    /// Hold the hover pose for the whole run.
    Hover,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorGains {
    pub rejection: Matrix3<f64>,
    pub contact: Matrix3<f64>,
}

impl Default for EstimatorGains {
    fn default() -> Self {
        Self {
            rejection: Matrix3::identity() * 20.0,
            contact: Matrix3::identity() * 20.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseConfig {
    pub position_std: f64,
    pub velocity_std: f64,
}

impl NoiseConfig {
    pub fn is_off(&self) -> bool {
        self.position_std == 0.0 && self.velocity_std == 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub vehicle: VehicleParams,
    pub wall: WallModel,
    pub gains: Gains,
    pub integral_bound: f64,
    pub switching: SwitchConfig,
    pub plan: PerchPlanConfig,
    pub estimator: EstimatorGains,
    pub variant: Variant,
    pub mission: Mission,
    pub start: StartCondition,
    pub start_offset: Vec3,
    pub events: Vec<OperatorEvent>,
    pub disturbances: Vec<DisturbanceWindow>,
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    pub noise: NoiseConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            vehicle: VehicleParams::default(),
            wall: WallModel::default(),
            gains: Gains::default(),
            integral_bound: 0.5,
            switching: SwitchConfig::default(),
            plan: PerchPlanConfig::default(),
            estimator: EstimatorGains::default(),
            variant: Variant::Proposed,
            mission: Mission::PerchCycle,
            start: StartCondition::Hover,
            start_offset: Vec3::zeros(),
            events: vec![
                OperatorEvent {
                    time: 7.0,
                    signal: Signal::Perch,
                },
                OperatorEvent {
                    time: 14.0,
                    signal: Signal::Unperch,
                },
            ],
            disturbances: Vec::new(),
            dt: 1e-3,
            duration: 25.0,
            seed: 0,
            noise: NoiseConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn with_variant(&self, variant: Variant) -> Self {
        Self {
            variant,
            ..self.clone()
        }
    }

    /// Switching configuration with the variant's weight fraction applied.
    pub fn effective_switching(&self) -> SwitchConfig {
        SwitchConfig {
            rho: self.variant.rho().unwrap_or(self.switching.rho),
            ..self.switching
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = ScenarioError::Invalid;
        if !(self.dt > 0.0 && self.dt <= 0.01) {
            return Err(invalid(format!(
                "dt must lie in (0, 0.01], got {}",
                self.dt
            )));
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(invalid(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        if self.events.windows(2).any(|w| w[0].time > w[1].time) {
            return Err(invalid("events must be sorted by time".into()));
        }
        if self
            .events
            .iter()
            .any(|e| !e.time.is_finite() || e.time < 0.0)
        {
            return Err(invalid("event times must be finite and nonnegative".into()));
        }
        if self.disturbances.iter().any(|d| !(d.end >= d.start)) {
            return Err(invalid("disturbance windows need end >= start".into()));
        }
        if !(self.integral_bound >= 0.0) {
            return Err(invalid("integral_bound must be nonnegative".into()));
        }
        if self.noise.position_std < 0.0 || self.noise.velocity_std < 0.0 {
            return Err(invalid(
                "noise standard deviations must be nonnegative".into(),
            ));
        }
        self.vehicle.validate().map_err(invalid)?;
        self.wall.validate().map_err(invalid)?;
        self.gains.validate().map_err(invalid)?;
        self.switching.validate().map_err(invalid)?;
        self.plan.validate().map_err(invalid)?;
        for k in [&self.estimator.rejection, &self.estimator.contact] {
            if k.cholesky().is_none() {
                return Err(invalid("estimator gains must be positive definite".into()));
            }
        }
        Allocator::new(self.vehicle.geometry.clone(), self.vehicle.max_thrust)?;
        Ok(())
    }

    pub fn disturbance_at(&self, t: f64) -> crate::vehicle::Disturbances {
        let mut d = crate::vehicle::Disturbances::default();
        for w in self
            .disturbances
            .iter()
            .filter(|w| t >= w.start && t < w.end)
        {
            d.force += Vec3::from(w.force);
            d.angular += Vec3::from(w.angular);
        }
        d
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text)?;
        file.into_config()
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(&ScenarioFile::from_config(self)).expect("scenario serializes")
    }
}

// On-disk representation.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    format: String,
    version: u32,
    #[serde(default = "defaults::variant")]
    variant: Variant,
    #[serde(default = "defaults::mission")]
    mission: Mission,
    #[serde(default = "defaults::start")]
    start: StartCondition,
    #[serde(default)]
    start_offset: [f64; 3],
    #[serde(default = "defaults::dt")]
    dt: f64,
    #[serde(default = "defaults::duration")]
    duration: f64,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    noise: NoiseSection,
    #[serde(default)]
    vehicle: VehicleSection,
    #[serde(default)]
    wall: WallSection,
    #[serde(default)]
    gains: GainSection,
    #[serde(default)]
    estimator: EstimatorSection,
    #[serde(default)]
    switching: SwitchingSection,
    #[serde(default)]
    plan: PlanSection,
    #[serde(default = "defaults::events")]
    events: Vec<OperatorEvent>,
    #[serde(default)]
    disturbances: Vec<DisturbanceWindow>,
}

mod defaults {
    use super::*;

    pub fn variant() -> Variant {
        Variant::Proposed
    }
    pub fn mission() -> Mission {
        Mission::PerchCycle
    }
    pub fn start() -> StartCondition {
        StartCondition::Hover
    }
    pub fn dt() -> f64 {
        ScenarioConfig::default().dt
    }
    pub fn duration() -> f64 {
        ScenarioConfig::default().duration
    }
    pub fn events() -> Vec<OperatorEvent> {
        ScenarioConfig::default().events
    }
}

fn diagonal(m: &Matrix3<f64>) -> [f64; 3] {
    [m[(0, 0)], m[(1, 1)], m[(2, 2)]]
}

fn arr(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct NoiseSection {
    position_std: f64,
    velocity_std: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct VehicleSection {
    mass: f64,
    inertia: [f64; 3],
    gravity: f64,
    arm_length: f64,
    drag_ratio: f64,
    max_thrust: f64,
    rotor_time_constant: f64,
    tilt_rate_limit: f64,
    perch_travel_time: f64,
}

impl Default for VehicleSection {
    fn default() -> Self {
        let p = VehicleParams::default();
        Self {
            mass: p.mass,
            inertia: diagonal(&p.inertia),
            gravity: p.gravity,
            arm_length: p.geometry.positions[0].xy().norm(),
            drag_ratio: p.geometry.drag_ratio,
            max_thrust: p.max_thrust,
            rotor_time_constant: p.rotor_time_constant,
            tilt_rate_limit: p.tilt_rate_limit,
            perch_travel_time: p.perch_travel_time,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct WallSection {
    point: [f64; 3],
    normal: [f64; 3],
    magnet_capacity: f64,
    magnet_range: f64,
    attach_tolerance: f64,
    magnet_offset: [f64; 3],
    contact_stiffness: f64,
    contact_damping: f64,
}

impl Default for WallSection {
    fn default() -> Self {
        let w = WallModel::default();
        Self {
            point: arr(&w.point),
            normal: arr(&w.normal),
            magnet_capacity: w.magnet_capacity,
            magnet_range: w.magnet_range,
            attach_tolerance: w.attach_tolerance,
            magnet_offset: arr(&w.magnet_offset),
            contact_stiffness: w.contact_stiffness,
            contact_damping: w.contact_damping,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GainSection {
    position: [f64; 3],
    velocity: [f64; 3],
    attitude: [f64; 3],
    rate: [f64; 3],
    attitude_integral: [f64; 3],
    integral_bound: f64,
}

impl Default for GainSection {
    fn default() -> Self {
        let g = Gains::default();
        Self {
            position: diagonal(&g.position),
            velocity: diagonal(&g.velocity),
            attitude: diagonal(&g.attitude),
            rate: diagonal(&g.rate),
            attitude_integral: diagonal(&g.attitude_integral),
            integral_bound: ScenarioConfig::default().integral_bound,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct EstimatorSection {
    rejection_gain: [f64; 3],
    contact_gain: [f64; 3],
}

impl Default for EstimatorSection {
    fn default() -> Self {
        let e = EstimatorGains::default();
        Self {
            rejection_gain: diagonal(&e.rejection),
            contact_gain: diagonal(&e.contact),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SwitchingSection {
    f2p_threshold: f64,
    p2f_threshold: f64,
    rho: f64,
}

impl Default for SwitchingSection {
    fn default() -> Self {
        let s = SwitchConfig::default();
        Self {
            f2p_threshold: s.f2p_threshold,
            p2f_threshold: s.p2f_threshold,
            rho: s.rho,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct PlanSection {
    standoff: f64,
    penetration: f64,
    approach_duration: f64,
    perch_duration: f64,
    hover_position: [f64; 3],
    hover_yaw: f64,
    hover_pitch: f64,
    hover_hold: f64,
}

impl Default for PlanSection {
    fn default() -> Self {
        let p = PerchPlanConfig::default();
        Self {
            standoff: p.standoff,
            penetration: p.penetration,
            approach_duration: p.approach_duration,
            perch_duration: p.perch_duration,
            hover_position: arr(&p.hover_position),
            hover_yaw: p.hover_yaw,
            hover_pitch: p.hover_pitch,
            hover_hold: p.hover_hold,
        }
    }
}

impl ScenarioFile {
    fn into_config(self) -> Result<ScenarioConfig, ScenarioError> {
        if self.format != FORMAT_TAG {
            return Err(ScenarioError::Format(self.format));
        }
        if self.version != FORMAT_VERSION {
            return Err(ScenarioError::Format(format!(
                "{} version {}",
                self.format, self.version
            )));
        }
        let v = self.vehicle;
        let normal = Vec3::from(self.wall.normal);
        let cfg = ScenarioConfig {
            vehicle: VehicleParams {
                mass: v.mass,
                inertia: diag(v.inertia),
                gravity: v.gravity,
                geometry: RotorGeometry::x_config(v.arm_length, v.drag_ratio),
                max_thrust: v.max_thrust,
                rotor_time_constant: v.rotor_time_constant,
                tilt_rate_limit: v.tilt_rate_limit,
                perch_travel_time: v.perch_travel_time,
            },
            wall: WallModel {
                point: Vec3::from(self.wall.point),
                normal,
                magnet_capacity: self.wall.magnet_capacity,
                magnet_range: self.wall.magnet_range,
                attach_tolerance: self.wall.attach_tolerance,
                magnet_offset: Vec3::from(self.wall.magnet_offset),
                contact_stiffness: self.wall.contact_stiffness,
                contact_damping: self.wall.contact_damping,
            },
            gains: Gains {
                position: diag(self.gains.position),
                velocity: diag(self.gains.velocity),
                attitude: diag(self.gains.attitude),
                rate: diag(self.gains.rate),
                attitude_integral: diag(self.gains.attitude_integral),
            },
            integral_bound: self.gains.integral_bound,
            switching: SwitchConfig {
                f2p_threshold: self.switching.f2p_threshold,
                p2f_threshold: self.switching.p2f_threshold,
                rho: self.switching.rho,
            },
            plan: PerchPlanConfig {
                standoff: self.plan.standoff,
                penetration: self.plan.penetration,
                approach_duration: self.plan.approach_duration,
                perch_duration: self.plan.perch_duration,
                hover_position: Vec3::from(self.plan.hover_position),
                hover_yaw: self.plan.hover_yaw,
                hover_pitch: self.plan.hover_pitch,
                hover_hold: self.plan.hover_hold,
            },
            estimator: EstimatorGains {
                rejection: diag(self.estimator.rejection_gain),
                contact: diag(self.estimator.contact_gain),
            },
            variant: self.variant,
            mission: self.mission,
            start: self.start,
            start_offset: Vec3::from(self.start_offset),
            events: self.events,
            disturbances: self.disturbances,
            dt: self.dt,
            duration: self.duration,
            seed: self.seed,
            noise: NoiseConfig {
                position_std: self.noise.position_std,
                velocity_std: self.noise.velocity_std,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn from_config(c: &ScenarioConfig) -> Self {
        let p = &c.vehicle;
        let w = &c.wall;
        Self {
            format: FORMAT_TAG.into(),
            version: FORMAT_VERSION,
            variant: c.variant,
            mission: c.mission,
            start: c.start,
            start_offset: arr(&c.start_offset),
            dt: c.dt,
            duration: c.duration,
            seed: c.seed,
            noise: NoiseSection {
                position_std: c.noise.position_std,
                velocity_std: c.noise.velocity_std,
            },
            vehicle: VehicleSection {
                mass: p.mass,
                inertia: diagonal(&p.inertia),
                gravity: p.gravity,
                arm_length: p.geometry.positions[0].xy().norm(),
                drag_ratio: p.geometry.drag_ratio,
                max_thrust: p.max_thrust,
                rotor_time_constant: p.rotor_time_constant,
                tilt_rate_limit: p.tilt_rate_limit,
                perch_travel_time: p.perch_travel_time,
            },
            wall: WallSection {
                point: arr(&w.point),
                normal: arr(&w.normal),
                magnet_capacity: w.magnet_capacity,
                magnet_range: w.magnet_range,
                attach_tolerance: w.attach_tolerance,
                magnet_offset: arr(&w.magnet_offset),
                contact_stiffness: w.contact_stiffness,
                contact_damping: w.contact_damping,
            },
            gains: GainSection {
                position: diagonal(&c.gains.position),
                velocity: diagonal(&c.gains.velocity),
                attitude: diagonal(&c.gains.attitude),
                rate: diagonal(&c.gains.rate),
                attitude_integral: diagonal(&c.gains.attitude_integral),
                integral_bound: c.integral_bound,
            },
            estimator: EstimatorSection {
                rejection_gain: diagonal(&c.estimator.rejection),
                contact_gain: diagonal(&c.estimator.contact),
            },
            switching: SwitchingSection {
                f2p_threshold: c.switching.f2p_threshold,
                p2f_threshold: c.switching.p2f_threshold,
                rho: c.switching.rho,
            },
            plan: PlanSection {
                standoff: c.plan.standoff,
                penetration: c.plan.penetration,
                approach_duration: c.plan.approach_duration,
                perch_duration: c.plan.perch_duration,
                hover_position: arr(&c.plan.hover_position),
                hover_yaw: c.plan.hover_yaw,
                hover_pitch: c.plan.hover_pitch,
                hover_hold: c.plan.hover_hold,
            },
            events: c.events.clone(),
            disturbances: c.disturbances.clone(),
        }
    }
}

/// Human-readable description of the scenario file format.
pub const SCHEMA: &str = r#"# Scenario file (TOML)
#
# Required:
#   format  = "tiltperch-scenario"
#   version = 1
#
# Optional top-level keys (defaults in parentheses):
#   variant      proposed | no-transitions-rho0 | no-transitions-rho0.5 | no-freeze  (proposed)
#   mission      perch-cycle | hover                                                (perch-cycle)
#   start        hover | perched                                                    (hover)
#   start_offset [x, y, z] m added to the hover start position                      ([0, 0, 0])
#   dt           s, in (0, 0.01]                                                    (0.001)
#   duration     s, > 0                                                             (25)
#   seed         u64 seed for measurement noise                                     (0)
#
# Optional tables (every key optional):
#   [noise]      position_std (m), velocity_std (m/s)                     Gaussian, off by default
#   [vehicle]    mass, inertia [3], gravity, arm_length, drag_ratio, max_thrust,
#                rotor_time_constant, tilt_rate_limit, perch_travel_time
#   [wall]       point [3], normal [3] (unit, into free space), magnet_capacity, magnet_range,
#                attach_tolerance, magnet_offset [3] (body frame), contact_stiffness, contact_damping
#   [gains]      position, velocity, attitude, rate, attitude_integral (diagonals, [3]),
#                integral_bound (rad·s)
#   [estimator]  rejection_gain [3], contact_gain [3]  (diagonals, 1/s)
#   [switching]  f2p_threshold (N), p2f_threshold (N), rho (weight fraction while perched)
#   [plan]       standoff (m), penetration (m), approach_duration (s), perch_duration (s),
#                hover_position [3], hover_yaw (rad), hover_pitch (rad), hover_hold (s)
#
# Arrays of tables:
#   [[events]]        time (s), signal = "S_f2p" | "S_p2f"     sorted by time
#                     (default: S_f2p at 7 s, S_p2f at 14 s)
#   [[disturbances]]  start (s), end (s), force [3] (N, world), angular [3] (rad/s², body)
"#;

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "format = \"tiltperch-scenario\"\nversion = 1\n";

    #[test]
    fn minimal_file_yields_defaults() {
        let cfg = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = ScenarioConfig {
            variant: Variant::NoTransitionsRhoHalf,
            ..ScenarioConfig::default()
        };
        cfg.disturbances.push(DisturbanceWindow {
            start: 1.0,
            end: 2.0,
            force: [0.0, 0.0, -5.0],
            angular: [0.0; 3],
        });
        cfg.plan.hover_pitch = 0.3;
        let text = cfg.to_toml_string();
        assert_eq!(ScenarioConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_wrong_format_and_version() {
        assert!(matches!(
            ScenarioConfig::from_toml_str("format = \"other\"\nversion = 1\n"),
            Err(ScenarioError::Format(_))
        ));
        assert!(matches!(
            ScenarioConfig::from_toml_str("format = \"tiltperch-scenario\"\nversion = 9\n"),
            Err(ScenarioError::Format(_))
        ));
        assert!(matches!(
            ScenarioConfig::from_toml_str("version = 1\n"),
            Err(ScenarioError::Parse(_))
        ));
    }

    #[test]
    fn rejects_unknown_keys() {
        let text = format!("{MINIMAL}[vehicle]\nmas = 2.0\n");
        assert!(matches!(
            ScenarioConfig::from_toml_str(&text),
            Err(ScenarioError::Parse(_))
        ));
    }

    #[test]
    fn rejects_invalid_values() {
        for extra in [
            "dt = 0.02\n",
            "dt = 0.0\n",
            "duration = -1.0\n",
            "[[events]]\ntime = 5.0\nsignal = \"S_p2f\"\n[[events]]\ntime = 1.0\nsignal = \"S_f2p\"\n",
            "[vehicle]\nmass = 0.0\n",
            "[wall]\nnormal = [0.0, 0.0, 2.0]\n",
        ] {
            let text = format!("{MINIMAL}{extra}");
            assert!(
                matches!(ScenarioConfig::from_toml_str(&text), Err(ScenarioError::Invalid(_))),
                "{extra}"
            );
        }
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(Variant::parse(v.name()), Some(v));
        }
        assert_eq!(Variant::parse("nope"), None);
    }

    #[test]
    fn disturbance_windows_sum() {
        let cfg = ScenarioConfig {
            disturbances: vec![
                DisturbanceWindow {
                    start: 0.0,
                    end: 2.0,
                    force: [1.0, 0.0, 0.0],
                    angular: [0.0; 3],
                },
                DisturbanceWindow {
                    start: 1.0,
                    end: 3.0,
                    force: [0.0, 2.0, 0.0],
                    angular: [0.0, 0.0, 1.0],
                },
            ],
            ..ScenarioConfig::default()
        };
        assert_eq!(cfg.disturbance_at(0.5).force, Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(cfg.disturbance_at(1.5).force, Vec3::new(1.0, 2.0, 0.0));
        assert_eq!(cfg.disturbance_at(2.0).force, Vec3::new(0.0, 2.0, 0.0));
        assert_eq!(cfg.disturbance_at(3.0).force, Vec3::zeros());
    }
}
