use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::numerics::integrate_adaptive;

/// How to evaluate depolarization factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DepolarizationMode {
    /// Elliptic integrals by adaptive quadrature.
    #[default]
    Exact,
    /// Lᵢ ≈ (1/ℓᵢ) / Σⱼ(1/ℓⱼ).
    Approximate,
}

/// Homogeneous ellipsoid with semi-axes along the body frame axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidShape {
    semi_axes: Vector3<f64>,
    mass: f64,
}

impl EllipsoidShape {
    pub fn new(l1: f64, l2: f64, l3: f64, mass: f64) -> Result<Self> {
        for (i, l) in [l1, l2, l3].into_iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Argument(format!("semi-axis {} must be positive, got {l}", i + 1)));
            }
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Argument(format!("mass must be positive, got {mass}")));
        }
        Ok(EllipsoidShape { semi_axes: Vector3::new(l1, l2, l3), mass })
    }

    /// Ellipsoid whose mass follows from a uniform `density` [kg/m³].
    pub fn with_density(l1: f64, l2: f64, l3: f64, density: f64) -> Result<Self> {
        if !(density.is_finite() && density > 0.0) {
            return Err(Error::Argument(format!("density must be positive, got {density}")));
        }
        EllipsoidShape::new(l1, l2, l3, density * 4.0 * PI / 3.0 * l1 * l2 * l3)
    }

    pub fn sphere(radius: f64, mass: f64) -> Result<Self> {
        EllipsoidShape::new(radius, radius, radius, mass)
    }

    /// Spheroid with symmetry axis along body axis 3.
    pub fn spheroid(l_par: f64, l_perp: f64, mass: f64) -> Result<Self> {
        EllipsoidShape::new(l_perp, l_perp, l_par, mass)
    }

    pub fn semi_axes(&self) -> Vector3<f64> {
        self.semi_axes
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// V = 4πℓ₁ℓ₂ℓ₃/3 [m³].
    pub fn volume(&self) -> f64 {
        4.0 * PI / 3.0 * self.semi_axes.product()
    }

    pub fn density(&self) -> f64 {
        self.mass / self.volume()
    }

    /// Radius of the sphere of equal volume, (3V/4π)^(1/3).
    pub fn equivalent_radius(&self) -> f64 {
        self.semi_axes.product().cbrt()
    }

    pub fn is_sphere(&self) -> bool {
        let l = self.semi_axes;
        l[0] == l[1] && l[1] == l[2]
    }

    /// Principal moments I₁ = m(ℓ₂² + ℓ₃²)/5 and cyclic [kg m²].
    pub fn moments_of_inertia(&self) -> Vector3<f64> {
        let l2 = self.semi_axes.component_mul(&self.semi_axes);
        let m5 = self.mass / 5.0;
        Vector3::new(m5 * (l2[1] + l2[2]), m5 * (l2[2] + l2[0]), m5 * (l2[0] + l2[1]))
    }

    /// Depolarization factors (L₁, L₂, L₃), summing to one.
    pub fn depolarization_factors(&self, mode: DepolarizationMode) -> Vector3<f64> {
        match mode {
            DepolarizationMode::Exact => exact_depolarization(&self.semi_axes),
            DepolarizationMode::Approximate => approximate_depolarization(&self.semi_axes),
        }
    }
}

fn approximate_depolarization(l: &Vector3<f64>) -> Vector3<f64> {
    let raw = Vector3::from_fn(|i, _| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        1.0 / (1.0 + l[i] / l[j] + l[i] / l[k])
    });
    raw / raw.sum()
}

/// Lᵢ = (ℓ₁ℓ₂ℓ₃/2) ∫₀^∞ ds / ((s + ℓᵢ²) √((s+ℓ₁²)(s+ℓ₂²)(s+ℓ₃²))), with
/// s = a² tan²u mapping the half line onto [0, π/2), a the smallest semi-axis.
fn exact_depolarization(l: &Vector3<f64>) -> Vector3<f64> {
    let scale = l.min();
    let l = l / scale;
    let sq = l.component_mul(&l);
    let prefactor = 0.5 * l.product();
    let integrand = |u: f64| -> Vector3<f64> {
        let (sin, cos) = u.sin_cos();
        if cos <= 0.0 {
            return Vector3::zeros();
        }
        let t = sin / cos;
        let s = t * t;
        let ds = 2.0 * t / (cos * cos);
        let root = ((s + sq[0]) * (s + sq[1]) * (s + sq[2])).sqrt();
        Vector3::new(1.0 / (s + sq[0]), 1.0 / (s + sq[1]), 1.0 / (s + sq[2])) * (prefactor * ds / root)
    };
    let seeds: Vec<f64> = (0..=16).map(|i| 0.5 * PI * i as f64 / 16.0).collect();
    let r = integrate_adaptive(integrand, &seeds, 1e-14, 1e-15, 50_000)
        .expect("depolarization integrand is finite");
    r.value
}
