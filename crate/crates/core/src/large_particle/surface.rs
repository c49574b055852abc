use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::EllipsoidShape;
use crate::numerics::gauss_legendre;

/// Surface element in the body frame, measured from the center of mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePatch {
    pub r_s: Vector3<f64>,
    /// Outward unit normal.
    pub e_perp: Vector3<f64>,
    /// Area [m²].
    pub area: f64,
}

impl SurfacePatch {
    pub fn new(r_s: Vector3<f64>, e_perp: Vector3<f64>, area: f64) -> Result<Self> {
        if !((e_perp.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::Argument(format!("surface normal must be a unit vector, norm {}", e_perp.norm())));
        }
        if !(area.is_finite() && area > 0.0) {
            return Err(Error::Argument(format!("patch area must be positive, got {area}")));
        }
        if !r_s.iter().all(|x| x.is_finite()) {
            return Err(Error::Argument("patch position must be finite".into()));
        }
        Ok(SurfacePatch { r_s, e_perp, area })
    }
}

/// Spheroid x²/ℓ⊥² + y²/ℓ⊥² + z²/ℓ∥² = 1 tiled by Gauss–Legendre nodes in
/// cos θ and uniform azimuth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricSpheroidSurface {
    pub l_par: f64,
    pub l_perp: f64,
    pub polar_order: usize,
    pub azimuth_order: usize,
}

impl ParametricSpheroidSurface {
    pub fn new(l_par: f64, l_perp: f64, polar_order: usize, azimuth_order: usize) -> Result<Self> {
        if !(l_par.is_finite() && l_par > 0.0 && l_perp.is_finite() && l_perp > 0.0) {
            return Err(Error::Argument(format!("spheroid semi-axes must be positive, got {l_par}, {l_perp}")));
        }
        if polar_order < 2 || azimuth_order < 3 {
            return Err(Error::Argument("surface quadrature needs at least 2 polar and 3 azimuthal nodes".into()));
        }
        Ok(ParametricSpheroidSurface { l_par, l_perp, polar_order, azimuth_order })
    }

    /// Surface of a spheroidal `shape` (ℓ₁ = ℓ₂, symmetry axis 3).
    pub fn from_shape(shape: &EllipsoidShape, polar_order: usize, azimuth_order: usize) -> Result<Self> {
        let l = shape.semi_axes();
        if l[0] != l[1] {
            return Err(Error::Argument(format!(
                "surface quadrature needs a spheroid with l1 = l2, got {} and {}",
                l[0], l[1]
            )));
        }
        ParametricSpheroidSurface::new(l[2], l[0], polar_order, azimuth_order)
    }

    pub fn patches(&self) -> Vec<SurfacePatch> {
        let (a, c) = (self.l_perp, self.l_par);
        let (x, w) = gauss_legendre(self.polar_order);
        let dphi = 2.0 * PI / self.azimuth_order as f64;
        let mut out = Vec::with_capacity(self.polar_order * self.azimuth_order);
        for (u, wu) in x.iter().zip(&w) {
            let s = (1.0 - u * u).sqrt();
            // |∂r/∂u × ∂r/∂φ| = ℓ⊥ √(ℓ∥²(1 − u²) + ℓ⊥²u²)
            let jac = a * (c * c * s * s + a * a * u * u).sqrt();
            for j in 0..self.azimuth_order {
                let phi = (j as f64 + 0.5) * dphi;
                let (sp, cp) = phi.sin_cos();
                let r = Vector3::new(a * s * cp, a * s * sp, c * u);
                let normal = Vector3::new(r.x / (a * a), r.y / (a * a), r.z / (c * c)).normalize();
                out.push(SurfacePatch { r_s: r, e_perp: normal, area: jac * wu * dphi });
            }
        }
        out
    }

    /// Closed-form surface area [m²].
    pub fn area(&self) -> f64 {
        let (a, c) = (self.l_perp, self.l_par);
        if a == c {
            4.0 * PI * a * a
        } else if c > a {
            let e = (1.0 - (a / c).powi(2)).sqrt();
            2.0 * PI * a * a * (1.0 + c / (a * e) * e.asin())
        } else {
            let e = (1.0 - (c / a).powi(2)).sqrt();
            2.0 * PI * a * a * (1.0 + (1.0 - e * e) / e * e.atanh())
        }
    }
}
