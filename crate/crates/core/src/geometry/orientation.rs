use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Center-of-mass displacement [m].
pub type Displacement = Vector3<f64>;

const TOL: f64 = 1e-12;

/// Proper rotation taking body-frame vectors to the lab frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orientation {
    r: Matrix3<f64>,
}

impl Orientation {
    /// Validate `r`: rᵀr = 𝟙 and det r = +1, each within 1e-12.
    pub fn new(r: Matrix3<f64>) -> Result<Self> {
        if !r.iter().all(|v| v.is_finite()) {
            return Err(Error::Validation("rotation tensor has non-finite entries".into()));
        }
        let defect = (r.transpose() * r - Matrix3::identity()).abs().max();
        if defect > TOL {
            return Err(Error::Validation(format!("rotation tensor is not orthogonal (defect {defect:e})")));
        }
        let det = r.determinant();
        if (det - 1.0).abs() > TOL {
            return Err(Error::Validation(format!("rotation tensor has determinant {det}")));
        }
        Ok(Orientation { r })
    }

    pub fn identity() -> Self {
        Orientation { r: Matrix3::identity() }
    }

    /// Rodrigues rotation by `theta` about the unit vector `axis`.
    pub fn from_axis_angle(axis: &Vector3<f64>, theta: f64) -> Result<Self> {
        if !((axis.norm() - 1.0).abs() <= TOL) {
            return Err(Error::Argument(format!("rotation axis must be a unit vector, |axis| = {}", axis.norm())));
        }
        if !theta.is_finite() {
            return Err(Error::Argument("rotation angle must be finite".into()));
        }
        let k = axis.cross_matrix();
        let r = Matrix3::identity() + k * theta.sin() + k * k * (1.0 - theta.cos());
        Ok(Orientation { r })
    }

    /// Rotation about a coordinate axis of the lab frame (0, 1, 2 = x, y, z).
    pub fn about_axis(index: usize, theta: f64) -> Self {
        let mut a = Vector3::zeros();
        a[index] = 1.0;
        Orientation::from_axis_angle(&a, theta).expect("coordinate axis is a unit vector")
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.r
    }

    pub fn inverse(&self) -> Self {
        Orientation { r: self.r.transpose() }
    }

    /// Relative rotation Rᵀ R′.
    pub fn relative_to(&self, other: &Orientation) -> Matrix3<f64> {
        self.r.transpose() * other.r
    }

    /// Lab-frame direction of body axis `i`.
    pub fn body_axis(&self, i: usize) -> Vector3<f64> {
        self.r.column(i).into_owned()
    }

    pub fn rotate(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.r * v
    }
}

impl Mul for Orientation {
    type Output = Orientation;
    fn mul(self, rhs: Orientation) -> Orientation {
        Orientation { r: self.r * rhs.r }
    }
}

impl Default for Orientation {
    fn default() -> Self {
        Orientation::identity()
    }
}

/// Angle θ ∈ [0, π] of the relative rotation, cos θ = (tr RᵀR′ − 1)/2.
pub fn rotation_angle(r: &Orientation, r_prime: &Orientation) -> f64 {
    let c = 0.5 * (r.relative_to(r_prime).trace() - 1.0);
    c.clamp(-1.0, 1.0).acos()
}
