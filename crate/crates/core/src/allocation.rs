//! Wrench ↔ actuator mapping for the four-rotor tiltrotor.
//!
//! Each rotor's thrust is split into a vertical part `T cos ν` along body `ẑ`
//! and a lateral part `T sin ν` along `t̂ = ẑ × r̂`. The resulting map from the
//! eight decomposed components to the body wrench is linear; the
//! minimum-norm solution is taken through the right pseudo-inverse and then
//! folded back into thrust magnitude and tilt angle.

use nalgebra::{Matrix3, SMatrix, SVector};

use crate::error::AllocationError;
use crate::geometry::Vec3;

pub type AllocationMatrix = SMatrix<f64, 6, 8>;
pub type DecomposedThrust = SVector<f64, 8>;

/// Thrust magnitudes below this leave the tilt angle undefined.
pub const MIN_THRUST_FOR_TILT: f64 = 1e-6;

/// Body-frame force and torque.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Wrench {
    pub force: Vec3,
    pub torque: Vec3,
}

impl Wrench {
    pub fn new(force: Vec3, torque: Vec3) -> Self {
        Self { force, torque }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn as_vector(&self) -> SVector<f64, 6> {
        SVector::<f64, 6>::from_iterator(self.force.iter().chain(self.torque.iter()).copied())
    }

    pub fn from_vector(v: &SVector<f64, 6>) -> Self {
        Self {
            force: Vec3::new(v[0], v[1], v[2]),
            torque: Vec3::new(v[3], v[4], v[5]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotorGeometry {
    /// Rotor hub positions in the body frame (m).
    pub positions: [Vec3; 4],
    /// Propeller spin directions, ±1.
    pub spin: [f64; 4],
    /// Drag-torque to thrust ratio (m).
    pub drag_ratio: f64,
}

impl RotorGeometry {
    /// Symmetric X configuration with arm length `arm` and alternating spin.
    pub fn x_config(arm: f64, drag_ratio: f64) -> Self {
        let positions = std::array::from_fn(|i| {
            let a = std::f64::consts::FRAC_PI_4 + i as f64 * std::f64::consts::FRAC_PI_2;
            Vec3::new(arm * a.cos(), arm * a.sin(), 0.0)
        });
        Self {
            positions,
            spin: [1.0, -1.0, 1.0, -1.0],
            drag_ratio,
        }
    }

    /// Unit tilt axis (along the arm). Collocated rotors fall back to body x.
    pub fn tilt_axis(&self, i: usize) -> Vec3 {
        let r = self.positions[i];
        Vec3::new(r.x, r.y, 0.0)
            .try_normalize(1e-12)
            .unwrap_or_else(Vec3::x)
    }

    /// Lateral thrust direction `ẑ × r̂` for a positive tilt.
    pub fn lateral_axis(&self, i: usize) -> Vec3 {
        Vec3::z().cross(&self.tilt_axis(i))
    }

    /// Unit thrust direction of rotor `i` at tilt `nu`.
    pub fn thrust_direction(&self, i: usize, nu: f64) -> Vec3 {
        Vec3::z() * nu.cos() + self.lateral_axis(i) * nu.sin()
    }
}

/// Builds the 6×8 map from `[T_i cos ν_i, T_i sin ν_i]` to `[f; τ]`.
/// Columns `2i` and `2i+1` belong to rotor `i`.
pub fn build_allocation(geometry: &RotorGeometry) -> Result<AllocationMatrix, AllocationError> {
    let mut a = AllocationMatrix::zeros();
    for i in 0..4 {
        let r = geometry.positions[i];
        let s = geometry.spin[i] * geometry.drag_ratio;
        for (k, dir) in [Vec3::z(), geometry.lateral_axis(i)]
            .into_iter()
            .enumerate()
        {
            let torque = r.cross(&dir) + dir * s;
            let col = 2 * i + k;
            a.fixed_view_mut::<3, 1>(0, col).copy_from(&dir);
            a.fixed_view_mut::<3, 1>(3, col).copy_from(&torque);
        }
    }
    let sv = a.singular_values();
    let sigma_max = sv.max();
    let tol = 1e-9 * sigma_max.max(1.0);
    let rank = sv.iter().filter(|s| **s > tol).count();
    if rank < 6 {
        return Err(AllocationError::RankDeficient {
            rank,
            sigma_min: sv.min(),
        });
    }
    Ok(a)
}

/// What the allocator hands to the actuators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorCommand {
    pub thrust: [f64; 4],
    pub tilt: [f64; 4],
    /// Perch-servo target, 0 = unperch, 1 = perch.
    pub perch_target: f64,
    pub saturated: [bool; 4],
}

impl ActuatorCommand {
    pub fn any_saturated(&self) -> bool {
        self.saturated.iter().any(|s| *s)
    }
}

impl Default for ActuatorCommand {
    fn default() -> Self {
        Self {
            thrust: [0.0; 4],
            tilt: [0.0; 4],
            perch_target: 0.0,
            saturated: [false; 4],
        }
    }
}

/// Minimum-norm allocator with a precomputed pseudo-inverse.
#[derive(Debug, Clone)]
pub struct Allocator {
    geometry: RotorGeometry,
    matrix: AllocationMatrix,
    pinv: SMatrix<f64, 8, 6>,
    max_thrust: f64,
}

impl Allocator {
    pub fn new(geometry: RotorGeometry, max_thrust: f64) -> Result<Self, AllocationError> {
        let matrix = build_allocation(&geometry)?;
        let gram = matrix * matrix.transpose();
        let gram_inv = gram.try_inverse().ok_or(AllocationError::RankDeficient {
            rank: 5,
            sigma_min: 0.0,
        })?;
        let pinv = matrix.transpose() * gram_inv;
        Ok(Self {
            geometry,
            matrix,
            pinv,
            max_thrust,
        })
    }

    pub fn geometry(&self) -> &RotorGeometry {
        &self.geometry
    }

    pub fn matrix(&self) -> &AllocationMatrix {
        &self.matrix
    }

    pub fn max_thrust(&self) -> f64 {
        self.max_thrust
    }

    /// Minimum-norm decomposed thrust components for `w`.
    pub fn decompose(&self, w: &Wrench) -> DecomposedThrust {
        self.pinv * w.as_vector()
    }

    /// Maps a wrench to thrusts and tilt angles.
    ///
    /// `last_tilt` is the previous commanded tilt; it is reused for rotors
    /// whose thrust is too small to define an angle. Thrusts above the limit
    /// are clamped and flagged, never redistributed.
    pub fn allocate(&self, w: &Wrench, last_tilt: &[f64; 4]) -> ActuatorCommand {
        let x = self.decompose(w);
        let mut cmd = ActuatorCommand::default();
        for i in 0..4 {
            let (xv, xl) = (x[2 * i], x[2 * i + 1]);
            let t = xv.hypot(xl);
            cmd.tilt[i] = if t < MIN_THRUST_FOR_TILT {
                last_tilt[i]
            } else {
                xl.atan2(xv)
            };
            if t > self.max_thrust {
                cmd.thrust[i] = self.max_thrust;
                cmd.saturated[i] = true;
            } else {
                cmd.thrust[i] = t;
            }
        }
        cmd
    }
}

/// Exact body wrench produced by the given thrusts and tilts.
pub fn forward_wrench(geometry: &RotorGeometry, thrust: &[f64; 4], tilt: &[f64; 4]) -> Wrench {
    let mut force = Vec3::zeros();
    let mut torque = Vec3::zeros();
    for i in 0..4 {
        let f = geometry.thrust_direction(i, tilt[i]) * thrust[i];
        force += f;
        torque += geometry.positions[i].cross(&f) + f * (geometry.spin[i] * geometry.drag_ratio);
    }
    Wrench { force, torque }
}

/// Diagonal 3×3 helper shared by config code.
pub fn diag(v: [f64; 3]) -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vec3::new(v[0], v[1], v[2]))
}
