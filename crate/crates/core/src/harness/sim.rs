//! The fixed-step closed loop.
//!
//! One tick, in order: estimators (with the force applied over the previous
//! interval), operator signals, supervisor, mode-entry policy (estimator
//! freeze, integral reset, re-plan), planner sample, wrench law, allocation,
//! log, actuators, contact, integration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::allocation::{ActuatorCommand, Allocator, Wrench};
use crate::control::{nominal_wrench, perch_wrench, rejection_force, AttitudeIntegral, Setpoint};
use crate::error::ScenarioError;
use crate::estimation::{contact_normal_force, freeze, unfreeze, EstimatorState};
use crate::geometry::{pitch_of, Vec3};
use crate::planner::{perch_setpoints, Plan, Segment};
use crate::supervisor::{Mode, PlanTarget, Supervisor, SupervisorState, WrenchLaw};
use crate::vehicle::{
    integrate, step_actuators, update_contact, ActuatorState, ContactEvent, ContactState,
    VehicleState,
};

use super::log::LogRecord;
use super::metrics::{compute_metrics, Metrics};
use super::scenario::{Mission, ScenarioConfig, Signal, StartCondition};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    Signal { signal: Signal },
    ModeChange { from: Mode, to: Mode },
    PerchCommand { target: f64 },
    Attached,
    Released,
    ForcedDetach,
    GroundContact,
    NumericalAbort { message: String },
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Signal { .. } => "signal",
            EventKind::ModeChange { .. } => "mode_change",
            EventKind::PerchCommand { .. } => "perch_command",
            EventKind::Attached => "attached",
            EventKind::Released => "released",
            EventKind::ForcedDetach => "forced_detach",
            EventKind::GroundContact => "ground_contact",
            EventKind::NumericalAbort { .. } => "numerical_abort",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            EventKind::Signal { signal } => match signal {
                Signal::Perch => "S_f2p".into(),
                Signal::Unperch => "S_p2f".into(),
            },
            EventKind::ModeChange { from, to } => format!("{from}->{to}"),
            EventKind::PerchCommand { target } => format!("eta_d={target}"),
            EventKind::NumericalAbort { message } => message.clone(),
            _ => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimEvent {
    pub t: f64,
    #[serde(flatten)]
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Completed,
    GroundContact { t: f64 },
    NumericalAbort { t: f64, message: String },
}

impl Outcome {
    pub fn is_completed(&self) -> bool {
        matches!(self, Outcome::Completed)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<LogRecord>,
    pub events: Vec<SimEvent>,
    pub metrics: Metrics,
    pub outcome: Outcome,
}

/// Step-by-step simulation of one scenario.
#[derive(Debug, Clone)]
pub struct Simulation {
    cfg: ScenarioConfig,
    allocator: Allocator,
    supervisor: Supervisor,
    setpoints: [Setpoint; 3],
    plan: Plan,
    state: VehicleState,
    actuators: ActuatorState,
    contact: ContactState,
    rejection: EstimatorState,
    contact_estimator: EstimatorState,
    contact_active: bool,
    integral: AttitudeIntegral,
    last_command: ActuatorCommand,
    last_applied: Vec3,
    next_event: usize,
    tick: u64,
    rng: ChaCha8Rng,
    records: Vec<LogRecord>,
    events: Vec<SimEvent>,
    outcome: Option<Outcome>,
}

/// Vehicle state as seen by the controller and estimators.
#[derive(Debug, Clone, Copy)]
struct Measurement {
    position: Vec3,
    velocity: Vec3,
}

impl Simulation {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self, ScenarioError> {
        cfg.validate()?;
        let cfg = cfg.clone();
        let params = &cfg.vehicle;
        let allocator = Allocator::new(params.geometry.clone(), params.max_thrust)?;
        let switching = cfg.effective_switching();
        let mut supervisor = Supervisor::new(cfg.variant.law(), switching);
        let setpoints = perch_setpoints(&cfg.wall, &cfg.plan);
        let [hover, standoff, behind] = setpoints;

        let (state, contact, plan) = match cfg.start {
            StartCondition::Hover => {
                let state =
                    VehicleState::at_rest(hover.position + cfg.start_offset, hover.rotation);
                let mut plan = Plan::hold(hover);
                if cfg.mission == Mission::PerchCycle {
                    plan.push(
                        Segment::between(
                            &hover,
                            &standoff,
                            cfg.plan.hover_hold,
                            cfg.plan.approach_duration,
                        )
                        .map_err(|e| ScenarioError::Invalid(e.to_string()))?,
                    );
                }
                (state, ContactState::detached(cfg.wall.gap(&state)), plan)
            }
            StartCondition::Perched => {
                supervisor.state = SupervisorState::perched(0.0);
                let position = behind.position + cfg.wall.normal * cfg.plan.penetration;
                let state = VehicleState::at_rest(position, behind.rotation);
                (
                    state,
                    ContactState::locked(position, behind.rotation),
                    Plan::hold(behind),
                )
            }
        };

        let policy = supervisor.policy();
        let trim = match policy.wrench {
            WrenchLaw::Perch { rho } => perch_wrench(rho, &state, params),
            _ => Wrench::new(
                state.rotation.apply_inverse(&params.weight()),
                Vec3::zeros(),
            ),
        };
        let mut command = allocator.allocate(&trim, &[0.0; 4]);
        command.perch_target = supervisor.state.perch_target;
        let actuators = ActuatorState::from_command(&command);
        let last_applied = state.rotation.apply(&actuators.body_wrench(params).force);

        let mut rejection =
            EstimatorState::new(cfg.estimator.rejection, &state.velocity, params.mass);
        if policy.rejection_frozen {
            rejection = freeze(&rejection);
        }
        let contact_estimator =
            EstimatorState::new(cfg.estimator.contact, &state.velocity, params.mass);

        Ok(Self {
            allocator,
            supervisor,
            setpoints,
            plan,
            state,
            actuators,
            contact,
            rejection,
            contact_estimator,
            contact_active: policy.contact_active,
            integral: AttitudeIntegral::new(cfg.integral_bound),
            last_command: command,
            last_applied,
            next_event: 0,
            tick: 0,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            records: Vec::new(),
            events: Vec::new(),
            outcome: None,
            cfg,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn time(&self) -> f64 {
        self.tick as f64 * self.cfg.dt
    }

    pub fn total_ticks(&self) -> u64 {
        (self.cfg.duration / self.cfg.dt).round() as u64
    }

    pub fn state(&self) -> &VehicleState {
        &self.state
    }

    pub fn contact(&self) -> &ContactState {
        &self.contact
    }

    pub fn actuators(&self) -> &ActuatorState {
        &self.actuators
    }

    pub fn mode(&self) -> Mode {
        self.supervisor.mode()
    }

    pub fn rejection_estimator(&self) -> &EstimatorState {
        &self.rejection
    }

    pub fn setpoints(&self) -> &[Setpoint; 3] {
        &self.setpoints
    }

    pub fn records(&self) -> &[LogRecord] {
        &self.records
    }

    pub fn events(&self) -> &[SimEvent] {
        &self.events
    }

    /// Replaces the reference trajectory from now on.
    pub fn set_plan(&mut self, plan: Plan) {
        self.plan = plan;
    }

    pub fn is_finished(&self) -> bool {
        self.outcome.is_some()
    }

    fn emit(&mut self, t: f64, kind: EventKind) {
        self.events.push(SimEvent { t, kind });
    }

    fn measure(&mut self) -> Measurement {
        let noise = self.cfg.noise;
        let mut m = Measurement {
            position: self.state.position,
            velocity: self.state.velocity,
        };
        if noise.is_off() {
            return m;
        }
        let draw = |rng: &mut ChaCha8Rng, std: f64| -> Vec3 {
            match Normal::new(0.0, std) {
                Ok(n) if std > 0.0 => Vec3::new(n.sample(rng), n.sample(rng), n.sample(rng)),
                _ => Vec3::zeros(),
            }
        };
        m.position += draw(&mut self.rng, noise.position_std);
        m.velocity += draw(&mut self.rng, noise.velocity_std);
        m
    }

    fn take_signals(&mut self, t: f64) -> (bool, bool) {
        let (mut perch, mut unperch) = (false, false);
        let horizon = t + 0.5 * self.cfg.dt;
        while let Some(ev) = self.cfg.events.get(self.next_event).copied() {
            if ev.time >= horizon {
                break;
            }
            self.next_event += 1;
            match ev.signal {
                Signal::Perch => perch = true,
                Signal::Unperch => unperch = true,
            }
            self.emit(t, EventKind::Signal { signal: ev.signal });
        }
        (perch, unperch)
    }

    fn replan(&mut self, from: Mode, target: PlanTarget, t: f64, meas: &Measurement) {
        let [_, standoff, behind] = self.setpoints;
        let duration = self.cfg.plan.perch_duration;
        let (start, goal) = match target {
            PlanTarget::FreeFlight if from == Mode::P => (behind, standoff),
            PlanTarget::BehindSurface => (self.plan.sample(t), behind),
            PlanTarget::Standoff => (Setpoint::hold(meas.position, self.state.rotation), standoff),
            _ => return,
        };
        let mut plan = Plan::hold(start);
        // endpoints share the perch attitude, so this cannot fail
        if let Ok(seg) = Segment::between(&start, &goal, t, duration) {
            plan.push(seg);
        }
        self.plan = plan;
    }

    /// Advances one tick. Returns `false` once the run has ended.
    pub fn step(&mut self) -> bool {
        if self.outcome.is_some() {
            return false;
        }
        if self.tick >= self.total_ticks() {
            self.outcome = Some(Outcome::Completed);
            return false;
        }
        let t = self.time();
        let dt = self.cfg.dt;
        let params = self.cfg.vehicle.clone();
        let meas = self.measure();

        self.rejection = self.rejection.step(
            &meas.velocity,
            &self.last_applied,
            params.mass,
            params.gravity,
            dt,
        );
        if self.contact_active {
            self.contact_estimator = self.contact_estimator.step(
                &meas.velocity,
                &self.last_applied,
                params.mass,
                params.gravity,
                dt,
            );
        }
        let lambda_hat = if self.contact_active {
            contact_normal_force(&self.contact_estimator, &self.cfg.wall)
        } else {
            0.0
        };

        let (s_f2p, s_p2f) = self.take_signals(t);
        let policy_before = self.supervisor.policy();
        let prev = self.supervisor.tick(lambda_hat, s_f2p, s_p2f, t);
        let policy = self.supervisor.policy();
        let mode = self.supervisor.mode();
        if prev.mode != mode {
            self.emit(
                t,
                EventKind::ModeChange {
                    from: prev.mode,
                    to: mode,
                },
            );
            self.integral = self.integral.reset();
        }
        let perch_target = self.supervisor.state.perch_target;
        if prev.perch_target != perch_target {
            self.emit(
                t,
                EventKind::PerchCommand {
                    target: perch_target,
                },
            );
        }
        if policy.rejection_frozen && !self.rejection.frozen {
            self.rejection = freeze(&self.rejection);
        } else if !policy.rejection_frozen && self.rejection.frozen {
            self.rejection = unfreeze(&self.rejection, &meas.velocity, params.mass);
        }
        if policy.contact_active && !self.contact_active {
            self.contact_estimator = self
                .contact_estimator
                .restarted(&meas.velocity, params.mass);
        }
        self.contact_active = policy.contact_active;
        if prev.mode != mode || policy.plan != policy_before.plan {
            self.replan(prev.mode, policy.plan, t, &meas);
        }

        let sp = self.plan.sample(t);
        let measured = VehicleState {
            position: meas.position,
            velocity: meas.velocity,
            ..self.state
        };
        let (wrench, integral, error) =
            nominal_wrench(&measured, &sp, &self.cfg.gains, &self.integral, &params, dt);
        let wrench = match policy.wrench {
            WrenchLaw::NominalWithRejection => {
                self.integral = integral;
                Wrench::new(
                    wrench.force + rejection_force(&self.rejection, &self.state.rotation),
                    wrench.torque,
                )
            }
            WrenchLaw::NominalOnly => {
                self.integral = integral;
                wrench
            }
            WrenchLaw::Perch { rho } => perch_wrench(rho, &self.state, &params),
        };
        let mut command = self.allocator.allocate(&wrench, &self.last_command.tilt);
        command.perch_target = perch_target;

        let disturbance = self.cfg.disturbance_at(t);
        let n = self.cfg.wall.normal;
        let lambda_true = if self.contact.attached {
            n.dot(&(params.weight() - self.last_applied - disturbance.force))
        } else {
            n.dot(&(self.contact.nearfield_force + self.cfg.wall.penetration_force(&self.state)))
        };
        self.records.push(LogRecord {
            t,
            position: self.state.position,
            velocity: self.state.velocity,
            pitch: pitch_of(&self.state.rotation),
            quaternion: self.state.rotation.to_quaternion(),
            angular_velocity: self.state.angular_velocity,
            mode,
            attached: self.contact.attached,
            eta_d: perch_target,
            eta: self.actuators.perch,
            thrust: self.actuators.thrust,
            thrust_command: command.thrust,
            tilt: self.actuators.tilt,
            disturbance_estimate: self.rejection.estimate,
            lambda_hat,
            lambda_true,
            attitude_error: error.attitude.norm(),
            position_error: error.position.norm(),
            saturated: command.saturated,
            gap: if self.contact.attached {
                0.0
            } else {
                self.cfg.wall.gap(&self.state)
            },
            max_thrust: params.max_thrust,
        });

        self.actuators = step_actuators(&self.actuators, &command, dt, &params);
        self.last_command = command;
        let applied = self
            .state
            .rotation
            .apply(&self.actuators.body_wrench(&params).force);
        self.contact = update_contact(
            &self.state,
            &self.actuators,
            &(applied + disturbance.force),
            &self.contact,
            &self.cfg.wall,
            &params,
        );
        match self.contact.event {
            Some(ContactEvent::Attached) => {
                if let Some((p, r)) = self.contact.anchor {
                    self.state = VehicleState::at_rest(p, r);
                }
                self.emit(t, EventKind::Attached);
            }
            Some(ContactEvent::Released) => self.emit(t, EventKind::Released),
            Some(ContactEvent::ForcedDetach) => self.emit(t, EventKind::ForcedDetach),
            None => {}
        }

        self.tick += 1;
        let t_next = self.time();
        match integrate(
            &self.state,
            &self.actuators,
            &disturbance,
            &self.contact,
            &self.cfg.wall,
            &params,
            dt,
        ) {
            Ok(next) => self.state = next,
            Err(e) => {
                let message = e.to_string();
                self.emit(
                    t_next,
                    EventKind::NumericalAbort {
                        message: message.clone(),
                    },
                );
                self.outcome = Some(Outcome::NumericalAbort { t: t_next, message });
                return false;
            }
        }
        self.last_applied = applied;
        if self.state.position.z <= 0.0 {
            self.emit(t_next, EventKind::GroundContact);
            self.outcome = Some(Outcome::GroundContact { t: t_next });
            return false;
        }
        true
    }

    /// Runs to the end and returns logs, events, metrics and outcome.
    pub fn finish(mut self) -> RunOutput {
        while self.step() {}
        let outcome = self.outcome.clone().unwrap_or(Outcome::Completed);
        let mut metrics = compute_metrics(&self.records).unwrap_or_default();
        metrics.completed = outcome.is_completed();
        metrics.failure = match &outcome {
            Outcome::Completed => None,
            Outcome::GroundContact { t } => Some(format!("ground contact at t = {t}")),
            Outcome::NumericalAbort { t, message } => Some(format!("{message} at t = {t}")),
        };
        RunOutput {
            records: self.records,
            events: self.events,
            metrics,
            outcome,
        }
    }
}

/// Runs a scenario to completion.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutput, ScenarioError> {
    Ok(Simulation::new(cfg)?.finish())
}
