//! Controller mode machine and the per-mode wiring of controller,
//! estimators and planner.
//!
//! ```text
//!  F ──S_f2p──▶ F2P ──λc > λ_f2p──▶ P ──S_p2f──▶ P2F ──λc < λ_p2f──▶ F
//!      η_d←1                                          η_d←0
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    /// Free flight.
    F,
    /// Flight-to-perch transition.
    F2P,
    /// Perched.
    P,
    /// Perch-to-flight transition.
    P2F,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::F, Mode::F2P, Mode::P, Mode::P2F];

    pub fn label(self) -> &'static str {
        match self {
            Mode::F => "F",
            Mode::F2P => "F2P",
            Mode::P => "P",
            Mode::P2F => "P2F",
        }
    }

    /// Numeric code used in CSV logs.
    pub fn code(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchConfig {
    /// Contact force above which perching is declared (N).
    pub f2p_threshold: f64,
    /// Contact force below which the vehicle is ready to fly off (N).
    pub p2f_threshold: f64,
    /// Fraction of the weight carried by the rotors while perched.
    pub rho: f64,
}

impl Default for SwitchConfig {
    fn default() -> Self {
        Self {
            f2p_threshold: 1.0,
            p2f_threshold: -1.0,
            rho: 0.5,
        }
    }
}

impl SwitchConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.f2p_threshold > self.p2f_threshold) {
            return Err("f2p threshold must exceed p2f threshold".into());
        }
        if !(0.0..1.0).contains(&self.rho) {
            return Err(format!("rho must lie in [0, 1), got {}", self.rho));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupervisorState {
    pub mode: Mode,
    /// Perch-servo target: 1 = perch, 0 = unperch.
    pub perch_target: f64,
    /// Latched perch request (two-mode law only).
    pub pending_f2p: bool,
    pub pending_p2f: bool,
    pub mode_entered_at: f64,
}

impl Default for SupervisorState {
    fn default() -> Self {
        Self {
            mode: Mode::F,
            perch_target: 0.0,
            pending_f2p: false,
            pending_p2f: false,
            mode_entered_at: 0.0,
        }
    }
}

impl SupervisorState {
    pub fn perched(now: f64) -> Self {
        Self {
            mode: Mode::P,
            perch_target: 1.0,
            mode_entered_at: now,
            ..Self::default()
        }
    }

    fn enter(&self, mode: Mode, now: f64) -> Self {
        Self {
            mode,
            mode_entered_at: now,
            pending_f2p: false,
            pending_p2f: false,
            ..*self
        }
    }
}

/// Four-mode machine. Operator signals are one-shot: a signal that does not
/// fire an edge in the current mode is dropped.
pub fn transition(
    sup: &SupervisorState,
    lambda_c: f64,
    s_f2p: bool,
    s_p2f: bool,
    cfg: &SwitchConfig,
    now: f64,
) -> SupervisorState {
    let idle = SupervisorState {
        pending_f2p: false,
        pending_p2f: false,
        ..*sup
    };
    match sup.mode {
        Mode::F if s_f2p => SupervisorState {
            perch_target: 1.0,
            ..sup.enter(Mode::F2P, now)
        },
        Mode::F2P if lambda_c > cfg.f2p_threshold => sup.enter(Mode::P, now),
        Mode::P if s_p2f => sup.enter(Mode::P2F, now),
        Mode::P2F if lambda_c < cfg.p2f_threshold => SupervisorState {
            perch_target: 0.0,
            ..sup.enter(Mode::F, now)
        },
        _ => idle,
    }
}

/// Two-mode machine without transition modes. The perch request is latched
/// until contact is detected; unperching switches straight back to F.
pub fn transition_without_transitions(
    sup: &SupervisorState,
    lambda_c: f64,
    s_f2p: bool,
    s_p2f: bool,
    cfg: &SwitchConfig,
    now: f64,
) -> SupervisorState {
    match sup.mode {
        Mode::F => {
            let pending = sup.pending_f2p || s_f2p;
            if pending && lambda_c > cfg.f2p_threshold {
                sup.enter(Mode::P, now)
            } else {
                SupervisorState {
                    pending_f2p: pending,
                    pending_p2f: false,
                    perch_target: if pending { 1.0 } else { sup.perch_target },
                    ..*sup
                }
            }
        }
        Mode::P if s_p2f => SupervisorState {
            perch_target: 0.0,
            ..sup.enter(Mode::F, now)
        },
        _ => SupervisorState {
            pending_f2p: false,
            pending_p2f: false,
            ..*sup
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WrenchLaw {
    /// `f_n + f_r`, τ.
    NominalWithRejection,
    /// `f_n`, τ.
    NominalOnly,
    /// Perched wrench with weight fraction ρ.
    Perch { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanTarget {
    /// Keep following the current free-flight plan.
    FreeFlight,
    /// Approach the setpoint behind the wall surface.
    BehindSurface,
    /// Back off to the standoff setpoint.
    Standoff,
    /// Hold the last setpoint.
    Hold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyDescriptor {
    pub wrench: WrenchLaw,
    pub rejection_frozen: bool,
    pub contact_active: bool,
    pub plan: PlanTarget,
}

/// Wiring of the four-mode law.
pub fn mode_policy(mode: Mode, cfg: &SwitchConfig) -> PolicyDescriptor {
    match mode {
        Mode::F => PolicyDescriptor {
            wrench: WrenchLaw::NominalWithRejection,
            rejection_frozen: false,
            contact_active: false,
            plan: PlanTarget::FreeFlight,
        },
        Mode::F2P => PolicyDescriptor {
            wrench: WrenchLaw::NominalOnly,
            rejection_frozen: true,
            contact_active: true,
            plan: PlanTarget::BehindSurface,
        },
        Mode::P => PolicyDescriptor {
            wrench: WrenchLaw::Perch { rho: cfg.rho },
            rejection_frozen: true,
            contact_active: true,
            plan: PlanTarget::Hold,
        },
        Mode::P2F => PolicyDescriptor {
            wrench: WrenchLaw::NominalOnly,
            rejection_frozen: true,
            contact_active: true,
            plan: PlanTarget::Standoff,
        },
    }
}

/// Wiring of the two-mode law. The rejection estimator is never frozen, so
/// while perched it integrates the wall constraint as if it were a disturbance.
pub fn no_transition_policy(mode: Mode, cfg: &SwitchConfig) -> PolicyDescriptor {
    match mode {
        Mode::P => PolicyDescriptor {
            wrench: WrenchLaw::Perch { rho: cfg.rho },
            rejection_frozen: false,
            contact_active: true,
            plan: PlanTarget::Hold,
        },
        _ => PolicyDescriptor {
            wrench: WrenchLaw::NominalWithRejection,
            rejection_frozen: false,
            contact_active: false,
            plan: PlanTarget::FreeFlight,
        },
    }
}

/// Four modes, but the rejection estimator always runs and the motion
/// controller stays on while perched.
pub fn no_freeze_policy(mode: Mode) -> PolicyDescriptor {
    let plan = match mode {
        Mode::F => PlanTarget::FreeFlight,
        Mode::F2P => PlanTarget::BehindSurface,
        Mode::P => PlanTarget::Hold,
        Mode::P2F => PlanTarget::Standoff,
    };
    PolicyDescriptor {
        wrench: WrenchLaw::NominalWithRejection,
        rejection_frozen: false,
        contact_active: mode != Mode::F,
        plan,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwitchingLaw {
    WithTransitions,
    WithoutTransitions,
    NoFreeze,
}

/// Mode machine plus its wiring, ticked once per control step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supervisor {
    pub law: SwitchingLaw,
    pub config: SwitchConfig,
    pub state: SupervisorState,
}

impl Supervisor {
    pub fn new(law: SwitchingLaw, config: SwitchConfig) -> Self {
        Self {
            law,
            config,
            state: SupervisorState::default(),
        }
    }

    pub fn mode(&self) -> Mode {
        self.state.mode
    }

    /// Advances the machine; returns the previous state.
    pub fn tick(&mut self, lambda_c: f64, s_f2p: bool, s_p2f: bool, now: f64) -> SupervisorState {
        let prev = self.state;
        self.state = match self.law {
            SwitchingLaw::WithoutTransitions => {
                transition_without_transitions(&prev, lambda_c, s_f2p, s_p2f, &self.config, now)
            }
            _ => transition(&prev, lambda_c, s_f2p, s_p2f, &self.config, now),
        };
        prev
    }

    pub fn policy(&self) -> PolicyDescriptor {
        match self.law {
            SwitchingLaw::WithTransitions => mode_policy(self.state.mode, &self.config),
            SwitchingLaw::NoFreeze => no_freeze_policy(self.state.mode),
            SwitchingLaw::WithoutTransitions => {
                let mut p = no_transition_policy(self.state.mode, &self.config);
                if self.state.mode == Mode::F && self.state.pending_f2p {
                    p.contact_active = true;
                    p.plan = PlanTarget::BehindSurface;
                }
                p
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SwitchConfig {
        SwitchConfig::default()
    }

    fn in_mode(mode: Mode) -> SupervisorState {
        SupervisorState {
            mode,
            perch_target: if matches!(mode, Mode::F) { 0.0 } else { 1.0 },
            ..SupervisorState::default()
        }
    }

    #[test]
    fn perch_request_enters_f2p_and_perches_servo() {
        let s = transition(&in_mode(Mode::F), 0.0, true, false, &cfg(), 3.0);
        assert_eq!(s.mode, Mode::F2P);
        assert_eq!(s.perch_target, 1.0);
        assert_eq!(s.mode_entered_at, 3.0);
    }

    #[test]
    fn contact_force_completes_perch() {
        assert_eq!(
            transition(&in_mode(Mode::F2P), 2.0, false, false, &cfg(), 0.0).mode,
            Mode::P
        );
        assert_eq!(
            transition(&in_mode(Mode::F2P), 1.0, false, false, &cfg(), 0.0).mode,
            Mode::F2P
        );
    }

    #[test]
    fn tension_completes_unperch() {
        let s = transition(&in_mode(Mode::P2F), -1.5, false, false, &cfg(), 0.0);
        assert_eq!(s.mode, Mode::F);
        assert_eq!(s.perch_target, 0.0);
    }

    #[test]
    fn unrelated_signals_are_dropped() {
        let s = transition(&in_mode(Mode::F2P), 0.0, true, true, &cfg(), 0.0);
        assert_eq!(s.mode, Mode::F2P);
        assert!(!s.pending_f2p && !s.pending_p2f);
    }

    #[test]
    fn two_mode_law_unperches_directly() {
        let s = transition_without_transitions(&in_mode(Mode::P), 0.0, false, true, &cfg(), 0.0);
        assert_eq!(s.mode, Mode::F);
        assert_eq!(s.perch_target, 0.0);
        let s = transition_without_transitions(&in_mode(Mode::F), 0.0, false, false, &cfg(), 0.0);
        assert_eq!(s, in_mode(Mode::F));
    }

    #[test]
    fn two_mode_law_latches_perch_request() {
        let s = transition_without_transitions(&in_mode(Mode::F), 0.0, true, false, &cfg(), 0.0);
        assert_eq!(s.mode, Mode::F);
        assert!(s.pending_f2p);
        assert_eq!(s.perch_target, 1.0);
        let s = transition_without_transitions(&s, 0.5, false, false, &cfg(), 0.1);
        assert_eq!(s.mode, Mode::F);
        let s = transition_without_transitions(&s, 1.5, false, false, &cfg(), 0.2);
        assert_eq!(s.mode, Mode::P);
        assert!(!s.pending_f2p);
    }

    #[test]
    fn two_mode_perch_policy_with_zero_rho_is_zero_wrench() {
        let c = SwitchConfig { rho: 0.0, ..cfg() };
        assert_eq!(
            no_transition_policy(Mode::P, &c).wrench,
            WrenchLaw::Perch { rho: 0.0 }
        );
    }

    #[test]
    fn policies_match_the_wiring_table() {
        let c = cfg();
        let f = mode_policy(Mode::F, &c);
        assert_eq!(f.wrench, WrenchLaw::NominalWithRejection);
        assert!(!f.rejection_frozen && !f.contact_active);
        for m in [Mode::F2P, Mode::P2F] {
            let p = mode_policy(m, &c);
            assert_eq!(p.wrench, WrenchLaw::NominalOnly);
            assert!(p.rejection_frozen && p.contact_active);
        }
        assert_eq!(
            mode_policy(Mode::P, &c).wrench,
            WrenchLaw::Perch { rho: 0.5 }
        );
        assert_eq!(mode_policy(Mode::F2P, &c).plan, PlanTarget::BehindSurface);
        assert_eq!(mode_policy(Mode::P2F, &c).plan, PlanTarget::Standoff);
    }

    #[test]
    fn rejection_frozen_exactly_outside_free_flight() {
        for m in Mode::ALL {
            assert_eq!(mode_policy(m, &cfg()).rejection_frozen, m != Mode::F);
        }
    }

    #[test]
    fn perch_target_alternates_over_random_traces() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut sup = Supervisor::new(SwitchingLaw::WithTransitions, cfg());
        let mut edges = Vec::new();
        let mut modes = vec![sup.mode()];
        for k in 0..20_000 {
            let lambda = rng.random_range(-3.0..3.0);
            let prev = sup.tick(
                lambda,
                rng.random_bool(0.05),
                rng.random_bool(0.05),
                k as f64,
            );
            if prev.perch_target != sup.state.perch_target {
                edges.push((prev.mode, sup.mode(), sup.state.perch_target));
            }
            if prev.mode != sup.mode() {
                modes.push(sup.mode());
            }
        }
        assert!(edges.len() > 4);
        for (i, (from, to, target)) in edges.iter().enumerate() {
            let expected = if i % 2 == 0 { 1.0 } else { 0.0 };
            assert_eq!(*target, expected);
            match target {
                t if *t == 1.0 => assert_eq!((*from, *to), (Mode::F, Mode::F2P)),
                _ => assert_eq!((*from, *to), (Mode::P2F, Mode::F)),
            }
        }
        // only the F → F2P → P → P2F → F cycle is ever traversed
        for w in modes.windows(2) {
            let next = match w[0] {
                Mode::F => Mode::F2P,
                Mode::F2P => Mode::P,
                Mode::P => Mode::P2F,
                Mode::P2F => Mode::F,
            };
            assert_eq!(w[1], next);
        }
    }
}
