//! SO(3) kernel: hat/vee, exponential and logarithm maps, attitude error.
//!
//! Rotations are plain 3×3 matrices wrapped in [`Rotation`]; tangent vectors
//! are axis-angle vectors in R³ (direction = axis, norm = angle).

use nalgebra::{Matrix3, Vector3};
use std::f64::consts::PI;

use crate::error::GeometryError;

pub type Vec3 = Vector3<f64>;
pub type SkewMatrix = Matrix3<f64>;

/// Below this norm the exp/log maps switch to their Taylor expansions.
pub const SMALL_ANGLE: f64 = 1e-8;

/// Angles closer than this to π take the symmetric-part axis extraction in [`log_so3`].
const NEAR_PI: f64 = 1e-3;

const SKEW_TOLERANCE: f64 = 1e-9;

/// World/body vertical unit vector `b3`.
pub fn b3() -> Vec3 {
    Vec3::new(0.0, 0.0, 1.0)
}

/// Element of SO(3) stored as a rotation matrix (body → world).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(Matrix3<f64>);

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

impl Rotation {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Wraps a matrix without checking orthonormality. Callers that build
    /// matrices by hand should follow up with [`Rotation::renormalized`].
    pub fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        Self(m)
    }

    /// Projects an arbitrary near-orthonormal matrix back onto SO(3).
    pub fn from_matrix(m: Matrix3<f64>) -> Self {
        Self(m).renormalized()
    }

    pub fn about_x(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self(Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c))
    }

    pub fn about_y(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self(Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c))
    }

    pub fn about_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    /// Builds the rotation whose columns are the given body axes expressed in world.
    pub fn from_axes(b1: Vec3, b2: Vec3, b3: Vec3) -> Self {
        Self::from_matrix(Matrix3::from_columns(&[b1, b2, b3]))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn compose(&self, other: &Rotation) -> Self {
        Self(self.0 * other.0)
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// `Rᵀ v`, i.e. a world vector expressed in the body frame.
    pub fn apply_inverse(&self, v: &Vec3) -> Vec3 {
        self.0.tr_mul(v)
    }

    pub fn column(&self, i: usize) -> Vec3 {
        self.0.column(i).into_owned()
    }

    /// Frobenius norm of `RᵀR − I`.
    pub fn orthonormality_error(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity()).norm()
    }

    /// Gram–Schmidt on the columns. Returns identity for degenerate input.
    pub fn renormalized(&self) -> Self {
        let c0 = self.0.column(0).into_owned();
        let c1 = self.0.column(1).into_owned();
        let x = match c0.try_normalize(1e-12) {
            Some(x) => x,
            None => return Self::identity(),
        };
        let y = match (c1 - x * x.dot(&c1)).try_normalize(1e-12) {
            Some(y) => y,
            None => return Self::identity(),
        };
        let z = x.cross(&y);
        Self(Matrix3::from_columns(&[x, y, z]))
    }

    /// Unit quaternion `(w, x, y, z)` with `w ≥ 0`, used for logging.
    pub fn to_quaternion(&self) -> [f64; 4] {
        let q = nalgebra::UnitQuaternion::from_matrix(&self.0);
        let q = q.quaternion();
        let sign = if q.w < 0.0 { -1.0 } else { 1.0 };
        [sign * q.w, sign * q.i, sign * q.j, sign * q.k]
    }
}

/// Cross-product matrix: `hat(v) * w == v × w`.
pub fn hat(v: &Vec3) -> SkewMatrix {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`hat`]. Rejects matrices whose symmetric part exceeds 1e-9.
pub fn vee(m: &SkewMatrix) -> Result<Vec3, GeometryError> {
    let sym = (m + m.transpose()) * 0.5;
    let asym = sym.norm();
    if !asym.is_finite() || asym > SKEW_TOLERANCE {
        return Err(GeometryError::NotSkewSymmetric(asym));
    }
    Ok(vee_unchecked(m))
}

fn vee_unchecked(m: &Matrix3<f64>) -> Vec3 {
    Vec3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)])
}

/// Rodrigues formula.
pub fn exp_so3(v: &Vec3) -> Rotation {
    let theta = v.norm();
    let k = hat(v);
    let k2 = k * k;
    let (a, b) = if theta < SMALL_ANGLE {
        (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
    };
    Rotation(Matrix3::identity() + k * a + k2 * b)
}

/// Principal logarithm, `‖result‖ ≤ π`.
///
/// At exactly π the axis sign is ambiguous; the axis whose first nonzero
/// component is nonnegative is returned.
pub fn log_so3(r: &Rotation) -> Vec3 {
    let m = r.matrix();
    let skew = vee_unchecked(&(m - m.transpose())) * 0.5; // sin θ · u
    let cos_theta = ((m.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let sin_theta = skew.norm();
    let theta = sin_theta.atan2(cos_theta);

    if theta < SMALL_ANGLE {
        return skew * (1.0 + theta * theta / 6.0);
    }
    if PI - theta > NEAR_PI {
        return skew * (theta / sin_theta);
    }

    // u uᵀ = (R + Rᵀ)/2 − cos θ I, scaled by 1/(1 − cos θ).
    let sym = (m + m.transpose()) * 0.5 - Matrix3::identity() * cos_theta;
    let denom = 1.0 - cos_theta;
    let diag = [sym[(0, 0)], sym[(1, 1)], sym[(2, 2)]];
    let k = (0..3)
        .max_by(|&a, &b| diag[a].total_cmp(&diag[b]))
        .unwrap_or(0);
    let mut axis = (sym.column(k) / denom).into_owned();
    axis = axis.normalize();
    if sin_theta > 1e-12 {
        if axis.dot(&skew) < 0.0 {
            axis = -axis;
        }
    } else if let Some(first) = axis.iter().find(|c| c.abs() > 1e-12) {
        if *first < 0.0 {
            axis = -axis;
        }
    }
    axis * theta
}

/// Attitude error `(Log(Rᵀ R_d))∨`, expressed in the current body frame.
pub fn rotation_error(r: &Rotation, r_d: &Rotation) -> Vec3 {
    log_so3(&r.transpose().compose(r_d))
}

/// Z-Y-X Euler pitch in `[−π/2, π/2]`. Logging only.
///
/// `R[2,0] = −sin(pitch)`; the argument is clamped to `[−1, 1]` so rotations
/// at gimbal lock (numerically just past ±1) still return ±π/2.
pub fn pitch_of(r: &Rotation) -> f64 {
    (-r.matrix()[(2, 0)]).clamp(-1.0, 1.0).asin()
}

/// Right Jacobian of SO(3): `d/dt exp(φ) = exp(φ) · (J_r(φ) φ̇)^`.
pub fn right_jacobian(phi: &Vec3) -> Matrix3<f64> {
    let theta = phi.norm();
    let k = hat(phi);
    if theta < 1e-6 {
        return Matrix3::identity() - k * 0.5 + k * k / 6.0;
    }
    let t2 = theta * theta;
    Matrix3::identity() - k * ((1.0 - theta.cos()) / t2)
        + k * k * ((theta - theta.sin()) / (t2 * theta))
}

/// Inverse of [`right_jacobian`], valid for `‖φ‖ < 2π`.
pub fn right_jacobian_inv(phi: &Vec3) -> Matrix3<f64> {
    let theta = phi.norm();
    let k = hat(phi);
    if theta < 1e-6 {
        return Matrix3::identity() + k * 0.5 + k * k / 12.0;
    }
    let c = 1.0 / (theta * theta) - (1.0 + theta.cos()) / (2.0 * theta * theta.sin());
    Matrix3::identity() + k * 0.5 + k * k * c
}
