//! Perch/unperch setpoints and closed-form motion primitives.
//!
//! Translation uses per-axis quintics (minimum jerk for the given position,
//! velocity and acceleration boundaries). Rotation uses a Hermite cubic in
//! the exponential coordinates of `R₀ᵀ R(t)` (minimum angular acceleration in
//! those coordinates), so endpoints and boundary body rates are met exactly.

use crate::control::Setpoint;
use crate::error::PlannerError;
use crate::geometry::{exp_so3, log_so3, right_jacobian, right_jacobian_inv, Rotation, Vec3};
use crate::vehicle::WallModel;

/// Translation boundary state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundary {
    pub position: Vec3,
    pub velocity: Vec3,
    pub acceleration: Vec3,
}

impl Boundary {
    pub fn at_rest(position: Vec3) -> Self {
        Self {
            position,
            velocity: Vec3::zeros(),
            acceleration: Vec3::zeros(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationSegment {
    /// `coeffs[k]` multiplies `t^k`, per axis.
    pub coeffs: [Vec3; 6],
    pub duration: f64,
}

/// Quintic matching position, velocity and acceleration at both ends.
pub fn min_jerk_segment(
    start: &Boundary,
    end: &Boundary,
    duration: f64,
) -> Result<TranslationSegment, PlannerError> {
    if !(duration > 0.0) {
        return Err(PlannerError::NonPositiveDuration(duration));
    }
    let t = duration;
    let c0 = start.position;
    let c1 = start.velocity;
    let c2 = start.acceleration * 0.5;
    let dp = end.position - (c0 + c1 * t + c2 * (t * t));
    let dv = end.velocity - (c1 + c2 * (2.0 * t));
    let da = end.acceleration - c2 * 2.0;
    let t2 = t * t;
    let c3 = (dp * 20.0 - dv * (8.0 * t) + da * t2) / (2.0 * t2 * t);
    let c4 = (dp * -30.0 + dv * (14.0 * t) - da * (2.0 * t2)) / (2.0 * t2 * t2);
    let c5 = (dp * 12.0 - dv * (6.0 * t) + da * t2) / (2.0 * t2 * t2 * t);
    Ok(TranslationSegment {
        coeffs: [c0, c1, c2, c3, c4, c5],
        duration,
    })
}

impl TranslationSegment {
    /// Position, velocity, acceleration and jerk at `t` (clamped to the segment).
    pub fn evaluate(&self, t: f64) -> [Vec3; 4] {
        let t = t.clamp(0.0, self.duration);
        let c = &self.coeffs;
        let p = c[0] + (c[1] + (c[2] + (c[3] + (c[4] + c[5] * t) * t) * t) * t) * t;
        let v = c[1] + (c[2] * 2.0 + (c[3] * 3.0 + (c[4] * 4.0 + c[5] * (5.0 * t)) * t) * t) * t;
        let a = c[2] * 2.0 + (c[3] * 6.0 + (c[4] * 12.0 + c[5] * (20.0 * t)) * t) * t;
        let j = c[3] * 6.0 + (c[4] * 24.0 + c[5] * (60.0 * t)) * t;
        [p, v, a, j]
    }

    /// `∫₀ᵀ ‖jerk‖² dt`, integrated exactly.
    pub fn jerk_cost(&self) -> f64 {
        let t = self.duration;
        (0..3)
            .map(|i| {
                let a = 6.0 * self.coeffs[3][i];
                let b = 24.0 * self.coeffs[4][i];
                let c = 60.0 * self.coeffs[5][i];
                a * a * t
                    + a * b * t.powi(2)
                    + (b * b + 2.0 * a * c) * t.powi(3) / 3.0
                    + b * c * t.powi(4) / 2.0
                    + c * c * t.powi(5) / 5.0
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSegment {
    pub start: Rotation,
    pub end: Rotation,
    /// Geodesic axis of `R₀ᵀ R_f` (zero when the endpoints coincide).
    pub axis: Vec3,
    pub angle: f64,
    /// Cubic coefficients of the exponential coordinates, `coeffs[k]·t^k`.
    pub coeffs: [Vec3; 4],
    pub duration: f64,
}

/// Cubic in exponential coordinates from `r0` (body rate `w0`) to `rf` (body rate `wf`).
pub fn min_accel_rotation(
    r0: &Rotation,
    rf: &Rotation,
    w0: &Vec3,
    wf: &Vec3,
    duration: f64,
) -> Result<RotationSegment, PlannerError> {
    if !(duration > 0.0) {
        return Err(PlannerError::NonPositiveDuration(duration));
    }
    let phi_f = log_so3(&r0.transpose().compose(rf));
    let angle = phi_f.norm();
    if angle >= std::f64::consts::PI - 1e-6 {
        return Err(PlannerError::AntipodalEndpoints(angle));
    }
    let axis = phi_f.try_normalize(1e-15).unwrap_or_else(Vec3::zeros);
    let rate0 = *w0;
    let rate_f = right_jacobian_inv(&phi_f) * wf;
    let t = duration;
    // Hermite cubic with φ(0) = 0, φ(T) = φ_f, φ'(0) = rate0, φ'(T) = rate_f.
    let c2 = (phi_f * 3.0 - rate0 * (2.0 * t) - rate_f * t) / (t * t);
    let c3 = (phi_f * -2.0 + (rate0 + rate_f) * t) / (t * t * t);
    Ok(RotationSegment {
        start: *r0,
        end: *rf,
        axis,
        angle,
        coeffs: [Vec3::zeros(), rate0, c2, c3],
        duration,
    })
}

impl RotationSegment {
    /// Rotation and body rate at `t` (clamped to the segment).
    pub fn evaluate(&self, t: f64) -> (Rotation, Vec3) {
        if t >= self.duration {
            let phi_f = self.coeffs[1] * self.duration
                + self.coeffs[2] * self.duration.powi(2)
                + self.coeffs[3] * self.duration.powi(3);
            let rate = self.coeffs[1]
                + self.coeffs[2] * (2.0 * self.duration)
                + self.coeffs[3] * (3.0 * self.duration.powi(2));
            return (self.end, right_jacobian(&phi_f) * rate);
        }
        let t = t.max(0.0);
        let c = &self.coeffs;
        let phi = (c[1] + (c[2] + c[3] * t) * t) * t;
        let rate = c[1] + (c[2] * 2.0 + c[3] * (3.0 * t)) * t;
        (
            self.start.compose(&exp_so3(&phi)),
            right_jacobian(&phi) * rate,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start_time: f64,
    pub translation: TranslationSegment,
    pub rotation: RotationSegment,
}

impl Segment {
    pub fn end_time(&self) -> f64 {
        self.start_time + self.translation.duration.max(self.rotation.duration)
    }

    /// Rest-to-rest (or rate-matched) move from `from` to `to`, starting at `start_time`.
    pub fn between(
        from: &Setpoint,
        to: &Setpoint,
        start_time: f64,
        duration: f64,
    ) -> Result<Self, PlannerError> {
        let translation = min_jerk_segment(
            &Boundary {
                position: from.position,
                velocity: from.velocity,
                acceleration: from.acceleration,
            },
            &Boundary {
                position: to.position,
                velocity: to.velocity,
                acceleration: to.acceleration,
            },
            duration,
        )?;
        let rotation = min_accel_rotation(
            &from.rotation,
            &to.rotation,
            &from.angular_velocity,
            &to.angular_velocity,
            duration,
        )?;
        Ok(Self {
            start_time,
            translation,
            rotation,
        })
    }

    fn sample_local(&self, t: f64) -> Setpoint {
        let [p, v, a, _] = self.translation.evaluate(t);
        let (r, w) = self.rotation.evaluate(t);
        Setpoint {
            position: p,
            velocity: v,
            acceleration: a,
            rotation: r,
            angular_velocity: w,
        }
    }
}

/// Piecewise trajectory. Before the first segment and after the last one the
/// nearest endpoint pose is held with zero rates.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    initial: Setpoint,
    segments: Vec<Segment>,
}

impl Plan {
    pub fn hold(setpoint: Setpoint) -> Self {
        Self {
            initial: Setpoint::hold(setpoint.position, setpoint.rotation),
            segments: Vec::new(),
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn push(&mut self, segment: Segment) {
        self.segments.push(segment);
    }

    /// Appends a move from the plan's terminal pose to `to`.
    pub fn then(
        &mut self,
        to: &Setpoint,
        start_time: f64,
        duration: f64,
    ) -> Result<(), PlannerError> {
        let from = self.terminal();
        let seg = Segment::between(&from, to, start_time, duration)?;
        self.segments.push(seg);
        Ok(())
    }

    /// Terminal pose with zero rates.
    pub fn terminal(&self) -> Setpoint {
        match self.segments.last() {
            Some(s) => {
                let end = s.sample_local(s.translation.duration.max(s.rotation.duration));
                Setpoint::hold(end.position, end.rotation)
            }
            None => self.initial,
        }
    }

    pub fn end_time(&self) -> f64 {
        self.segments.last().map_or(0.0, Segment::end_time)
    }

    pub fn sample(&self, t: f64) -> Setpoint {
        let Some(idx) = self.segments.iter().rposition(|s| s.start_time <= t) else {
            return match self.segments.first() {
                Some(s) => {
                    let sp = s.sample_local(0.0);
                    Setpoint::hold(sp.position, sp.rotation)
                }
                None => self.initial,
            };
        };
        let seg = &self.segments[idx];
        let local = t - seg.start_time;
        if local >= seg.translation.duration.max(seg.rotation.duration) {
            let end = seg.sample_local(local);
            return Setpoint::hold(end.position, end.rotation);
        }
        seg.sample_local(local)
    }
}

/// Free sample function for callers holding a plan reference.
pub fn sample(plan: &Plan, t: f64) -> Setpoint {
    plan.sample(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerchPlanConfig {
    /// Distance of the magnet face from the wall at the standoff pose (m).
    pub standoff: f64,
    /// Depth of the magnet face behind the wall at the perch target (m).
    pub penetration: f64,
    /// Hover → standoff duration (s).
    pub approach_duration: f64,
    /// Standoff ↔ wall duration (s).
    pub perch_duration: f64,
    pub hover_position: Vec3,
    pub hover_yaw: f64,
    pub hover_pitch: f64,
    /// Time spent at the hover pose before the approach starts (s).
    pub hover_hold: f64,
}

impl Default for PerchPlanConfig {
    fn default() -> Self {
        Self {
            standoff: 0.5,
            penetration: 0.1,
            approach_duration: 4.0,
            perch_duration: 3.0,
            hover_position: Vec3::new(0.0, 0.0, 1.5),
            hover_yaw: 0.0,
            hover_pitch: 0.0,
            hover_hold: 1.0,
        }
    }
}

impl PerchPlanConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.standoff > 0.0) || self.penetration < 0.0 {
            return Err("standoff must be positive and penetration nonnegative".into());
        }
        if !(self.approach_duration > 0.0) || !(self.perch_duration > 0.0) || self.hover_hold < 0.0
        {
            return Err("segment durations must be positive".into());
        }
        Ok(())
    }

    pub fn hover_rotation(&self) -> Rotation {
        Rotation::about_z(self.hover_yaw).compose(&Rotation::about_y(self.hover_pitch))
    }
}

/// Orientation with body `+z` along the wall normal, so the bottom-mounted
/// magnets face the wall, and body `y` kept as close as possible to the
/// hover pose's `y` axis.
pub fn perch_orientation(wall: &WallModel, hover: &Rotation) -> Rotation {
    let z = wall.normal;
    let y = [hover.column(1), hover.column(0), Vec3::z()]
        .into_iter()
        .find_map(|c| (c - z * z.dot(&c)).try_normalize(1e-6))
        .unwrap_or_else(|| z.cross(&Vec3::x()).normalize());
    let x = y.cross(&z);
    Rotation::from_axes(x, y, z)
}

/// Hover pose ①, standoff pose ② and the pose ③ behind the surface.
pub fn perch_setpoints(wall: &WallModel, cfg: &PerchPlanConfig) -> [Setpoint; 3] {
    let hover_r = cfg.hover_rotation();
    let perch_r = perch_orientation(wall, &hover_r);
    let offset = perch_r.apply(&wall.magnet_offset);
    let standoff = wall.point + wall.normal * cfg.standoff - offset;
    let behind = wall.point - wall.normal * cfg.penetration - offset;
    [
        Setpoint::hold(cfg.hover_position, hover_r),
        Setpoint::hold(standoff, perch_r),
        Setpoint::hold(behind, perch_r),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pitch_of;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn wall_at_x(x: f64) -> WallModel {
        WallModel {
            point: Vec3::new(x, 0.0, 1.5),
            normal: Vec3::new(-1.0, 0.0, 0.0),
            ..WallModel::default()
        }
    }

    fn interface(wall: &WallModel, sp: &Setpoint) -> Vec3 {
        sp.position + sp.rotation.apply(&wall.magnet_offset)
    }

    #[test]
    fn standoff_and_behind_offsets() {
        let wall = wall_at_x(1.0);
        let cfg = PerchPlanConfig::default();
        let [hover, standoff, behind] = perch_setpoints(&wall, &cfg);
        assert_eq!(hover.position, cfg.hover_position);
        assert!((interface(&wall, &standoff).x - 0.5).abs() < 1e-12);
        assert!((interface(&wall, &behind).x - 1.1).abs() < 1e-12);
        // bottom faces the wall at 90° pitch
        assert!((standoff.rotation.apply(&-Vec3::z()) - Vec3::x()).norm() < 1e-12);
        assert!((pitch_of(&standoff.rotation).abs() - FRAC_PI_2).abs() < 1e-6);
        let flush = PerchPlanConfig {
            penetration: 0.0,
            ..cfg
        };
        assert!((interface(&wall, &perch_setpoints(&wall, &flush)[2]).x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quintic_rest_to_rest_midpoint() {
        let seg = min_jerk_segment(
            &Boundary::at_rest(Vec3::zeros()),
            &Boundary::at_rest(Vec3::new(1.0, 0.0, 0.0)),
            2.0,
        )
        .unwrap();
        let [p, v, ..] = seg.evaluate(1.0);
        assert!((p.x - 0.5).abs() < 1e-12);
        assert!((v.x - 0.9375).abs() < 1e-12);
    }

    #[test]
    fn quintic_constant_when_endpoints_match() {
        let b = Boundary::at_rest(Vec3::new(0.3, -0.2, 1.0));
        let seg = min_jerk_segment(&b, &b, 3.0).unwrap();
        for t in [0.0, 0.7, 1.5, 3.0] {
            let [p, v, a, _] = seg.evaluate(t);
            assert_eq!(p, b.position);
            assert_eq!(v, Vec3::zeros());
            assert_eq!(a, Vec3::zeros());
        }
        assert_eq!(seg.jerk_cost(), 0.0);
    }

    #[test]
    fn non_positive_duration_is_rejected() {
        let b = Boundary::at_rest(Vec3::zeros());
        assert_eq!(
            min_jerk_segment(&b, &b, 0.0),
            Err(PlannerError::NonPositiveDuration(0.0))
        );
        let r = Rotation::identity();
        assert!(min_accel_rotation(&r, &r, &Vec3::zeros(), &Vec3::zeros(), -1.0).is_err());
    }

    #[test]
    fn antipodal_rotation_is_rejected() {
        let r0 = Rotation::identity();
        let rf = Rotation::about_x(std::f64::consts::PI);
        assert!(matches!(
            min_accel_rotation(&r0, &rf, &Vec3::zeros(), &Vec3::zeros(), 1.0),
            Err(PlannerError::AntipodalEndpoints(_))
        ));
    }

    #[test]
    fn rotation_constant_when_endpoints_match() {
        let r = Rotation::about_x(0.3);
        let seg = min_accel_rotation(&r, &r, &Vec3::zeros(), &Vec3::zeros(), 2.0).unwrap();
        let (rt, w) = seg.evaluate(0.9);
        assert!((rt.matrix() - r.matrix()).norm() < 1e-15);
        assert_eq!(w, Vec3::zeros());
    }

    #[test]
    fn rotation_midpoint_of_symmetric_rest_to_rest() {
        let seg = min_accel_rotation(
            &Rotation::identity(),
            &Rotation::about_y(FRAC_PI_2),
            &Vec3::zeros(),
            &Vec3::zeros(),
            2.0,
        )
        .unwrap();
        let (r, _) = seg.evaluate(1.0);
        assert!((pitch_of(&r) - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn plan_holds_before_and_after() {
        let [hover, standoff, _] = perch_setpoints(&wall_at_x(1.0), &PerchPlanConfig::default());
        let mut plan = Plan::hold(hover);
        plan.then(&standoff, 1.0, 4.0).unwrap();
        assert_eq!(plan.sample(0.0), hover);
        assert_eq!(plan.sample(0.5), hover);
        let end = plan.sample(100.0);
        assert!((end.position - standoff.position).norm() < 1e-12);
        assert_eq!(end.velocity, Vec3::zeros());
        assert_eq!(end.angular_velocity, Vec3::zeros());
        assert!((end.rotation.matrix() - standoff.rotation.matrix()).norm() < 1e-9);
    }

    fn arb_vec(s: f64) -> impl Strategy<Value = Vec3> {
        prop::array::uniform3(-s..s).prop_map(Vec3::from)
    }

    proptest! {
        #[test]
        fn translation_boundaries_are_exact(
            p0 in arb_vec(2.0), v0 in arb_vec(1.0), a0 in arb_vec(1.0),
            pf in arb_vec(2.0), vf in arb_vec(1.0), af in arb_vec(1.0),
            t in 0.5..5.0f64,
        ) {
            let start = Boundary { position: p0, velocity: v0, acceleration: a0 };
            let end = Boundary { position: pf, velocity: vf, acceleration: af };
            let seg = min_jerk_segment(&start, &end, t).unwrap();
            let [p, v, a, _] = seg.evaluate(0.0);
            prop_assert!((p - p0).norm() < 1e-9 && (v - v0).norm() < 1e-9 && (a - a0).norm() < 1e-9);
            let [p, v, a, _] = seg.evaluate(t);
            prop_assert!((p - pf).norm() < 1e-9 && (v - vf).norm() < 1e-9 && (a - af).norm() < 1e-9);
        }

        #[test]
        fn rotation_boundaries_are_exact(
            a in arb_vec(1.5), b in arb_vec(1.5), w0 in arb_vec(1.0), wf in arb_vec(1.0), t in 0.5..5.0f64,
        ) {
            let r0 = exp_so3(&a);
            let rf = exp_so3(&b);
            prop_assume!(log_so3(&r0.transpose().compose(&rf)).norm() < 3.0);
            let seg = min_accel_rotation(&r0, &rf, &w0, &wf, t).unwrap();
            let (r, w) = seg.evaluate(0.0);
            prop_assert!((r.matrix() - r0.matrix()).norm() < 1e-9);
            prop_assert!((w - w0).norm() < 1e-9);
            // evaluate just inside the end to exercise the polynomial branch
            let (r, w) = seg.evaluate(t * (1.0 - 1e-15));
            prop_assert!((r.matrix() - rf.matrix()).norm() < 1e-9);
            prop_assert!((w - wf).norm() < 1e-9);
        }

        #[test]
        fn sampled_rates_match_finite_differences(
            a in arb_vec(1.0), w0 in arb_vec(0.5), p0 in arb_vec(1.0), v0 in arb_vec(0.5), s in 0.05..0.95f64,
        ) {
            let from = Setpoint {
                position: p0, velocity: v0, acceleration: Vec3::zeros(),
                rotation: Rotation::identity(), angular_velocity: w0,
            };
            let to = Setpoint::hold(Vec3::new(1.0, 2.0, 0.5), exp_so3(&a));
            let seg = Segment::between(&from, &to, 0.0, 3.0).unwrap();
            let mut plan = Plan::hold(from);
            plan.push(seg);
            let t = 3.0 * s;
            let h = 1e-4;
            let (before, after, mid) = (plan.sample(t - h / 2.0), plan.sample(t + h / 2.0), plan.sample(t));
            let v_fd = (after.position - before.position) / h;
            prop_assert!((v_fd - mid.velocity).norm() < 1e-5);
            let w_fd = log_so3(&before.rotation.transpose().compose(&after.rotation)) / h;
            prop_assert!((w_fd - mid.angular_velocity).norm() < 1e-5);
        }

        #[test]
        fn chained_plan_is_continuous_at_joints(
            pa in arb_vec(1.0), pb in arb_vec(1.0), ra in arb_vec(1.0), rb in arb_vec(1.0),
        ) {
            let start = Setpoint::hold(Vec3::zeros(), Rotation::identity());
            let mut plan = Plan::hold(start);
            plan.then(&Setpoint::hold(pa, exp_so3(&ra)), 0.0, 2.0).unwrap();
            // replan mid-segment from the current sample
            let mid = plan.sample(1.2);
            let mut replanned = Plan::hold(start);
            replanned.push(plan.segments()[0]);
            replanned.push(Segment::between(&mid, &Setpoint::hold(pb, exp_so3(&rb)), 1.2, 2.0).unwrap());
            let before = replanned.sample(1.2 - 1e-12);
            let after = replanned.sample(1.2);
            prop_assert!((before.velocity - after.velocity).norm() < 1e-9);
            prop_assert!((before.acceleration - after.acceleration).norm() < 1e-9);
            prop_assert!((before.angular_velocity - after.angular_velocity).norm() < 1e-9);
        }
    }
}
