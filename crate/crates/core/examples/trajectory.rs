//! Plans the hover -> standoff -> behind-surface path for the default wall and
//! samples it.

use tiltperch::geometry::log_so3;
use tiltperch::planner::{perch_setpoints, PerchPlanConfig, Plan};
use tiltperch::WallModel;

fn main() {
    let wall = WallModel::default();
    let cfg = PerchPlanConfig::default();
    let [hover, standoff, behind] = perch_setpoints(&wall, &cfg);
    let mut plan = Plan::hold(hover);
    plan.then(&standoff, cfg.hover_hold, cfg.approach_duration)
        .expect("valid approach");
    plan.then(&behind, plan.end_time(), cfg.perch_duration)
        .expect("valid perch");
    for seg in plan.segments() {
        println!(
            "segment at t={:.2}s  jerk cost {:.5}",
            seg.start_time,
            seg.translation.jerk_cost()
        );
    }
    let steps = 20;
    for k in 0..=steps {
        let t = plan.end_time() * k as f64 / steps as f64;
        let s = plan.sample(t);
        println!(
            "t={t:5.2}  p=[{:6.3} {:6.3} {:6.3}]  |v|={:.3}  rotation angle={:6.2} deg",
            s.position.x,
            s.position.y,
            s.position.z,
            s.velocity.norm(),
            log_so3(&s.rotation).norm().to_degrees()
        );
    }
}
