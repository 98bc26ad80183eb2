//! Feeds the momentum observer a constant 3 N push and shows the first-order
//! convergence, then freezes it and shows the estimate holding.

use nalgebra::Matrix3;
use tiltperch::estimation::{freeze, unfreeze, EstimatorState};
use tiltperch::Vec3;

fn main() {
    let (mass, g, dt) = (1.65, 9.81, 1e-3);
    let push = Vec3::new(3.0, 0.0, 0.0);
    let rotors = Vec3::new(0.0, 0.0, mass * g);
    let mut v = Vec3::zeros();
    let mut est = EstimatorState::new(Matrix3::identity() * 20.0, &v, mass);
    for k in 1..=400 {
        let accel = (rotors + push) / mass - Vec3::new(0.0, 0.0, g);
        v += accel * dt;
        est = est.step(&v, &rotors, mass, g, dt);
        if k == 200 {
            est = freeze(&est);
            println!("frozen at t=0.200 s");
        }
        if k % 25 == 0 {
            let t = k as f64 * dt;
            println!(
                "t={t:.3}  estimate={:.4} N  first-order reference={:.4} N",
                est.estimate.x,
                3.0 * (1.0 - (-20.0 * t.min(0.2)).exp())
            );
        }
    }
    let est = unfreeze(&est, &v, mass);
    println!(
        "after unfreeze the estimate starts from {:.4} N",
        est.estimate.x
    );
}
