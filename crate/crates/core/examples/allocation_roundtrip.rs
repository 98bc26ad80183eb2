//! Maps a few body wrenches to rotor thrusts and tilts, then rebuilds the
//! wrench from the actuator commands.

use tiltperch::allocation::forward_wrench;
use tiltperch::{Allocator, Vec3, VehicleParams, Wrench};

fn main() {
    let params = VehicleParams::default();
    let alloc = Allocator::new(params.geometry.clone(), params.max_thrust)
        .expect("x configuration has full rank");
    let weight = params.mass * params.gravity;
    let cases = [
        (
            "hover",
            Wrench::new(Vec3::new(0.0, 0.0, weight), Vec3::zeros()),
        ),
        (
            "sideways push",
            Wrench::new(Vec3::new(4.0, 0.0, weight), Vec3::zeros()),
        ),
        (
            "yaw torque",
            Wrench::new(Vec3::new(0.0, 0.0, weight), Vec3::new(0.0, 0.0, 0.3)),
        ),
        (
            "pitched 90 deg",
            Wrench::new(Vec3::new(-weight, 0.0, 0.0), Vec3::zeros()),
        ),
        (
            "over the limit",
            Wrench::new(Vec3::new(0.0, 0.0, 40.0), Vec3::zeros()),
        ),
    ];
    for (name, w) in cases {
        let cmd = alloc.allocate(&w, &[0.0; 4]);
        let back = forward_wrench(alloc.geometry(), &cmd.thrust, &cmd.tilt);
        let err = (back.as_vector() - w.as_vector()).norm();
        println!("{name}");
        println!(
            "  thrust [N] {:?}",
            cmd.thrust.map(|t| (t * 1e3).round() / 1e3)
        );
        println!(
            "  tilt [deg] {:?}",
            cmd.tilt.map(|a| (a.to_degrees() * 10.0).round() / 10.0)
        );
        println!(
            "  saturated {:?}  round-trip error {err:.2e}",
            cmd.saturated
        );
    }
}
