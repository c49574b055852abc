//! Product quadrature on the unit sphere: Gauss–Legendre in cos θ times the
//! trapezoid rule in azimuth.

use std::f64::consts::PI;

use nalgebra::Vector3;

use super::gauss::gauss_legendre;
use crate::error::{Error, Result};

/// Unit directions with solid-angle weights [sr].
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub directions: Vec<Vector3<f64>>,
    pub weights: Vec<f64>,
    degree: usize,
}

impl SphereQuadrature {
    /// Highest spherical-polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vector3<f64>, f64)> {
        self.directions.iter().zip(self.weights.iter().copied())
    }

    /// Weighted sum of `f` over all nodes, in node order.
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(&Vector3<f64>) -> T,
    {
        let mut acc = T::default();
        for (n, w) in self.iter() {
            acc = acc + f(n) * w;
        }
        acc
    }
}

/// Orthonormal pair completing `axis` to a right-handed frame.
pub(crate) fn transverse_frame(axis: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let a = axis.normalize();
    let helper = if a.x.abs() <= a.y.abs() && a.x.abs() <= a.z.abs() {
        Vector3::x()
    } else if a.y.abs() <= a.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let u = (helper - a * a.dot(&helper)).normalize();
    let v = a.cross(&u);
    (u, v)
}

fn product_rule(
    order: usize,
    azimuth: usize,
    cos_range: (f64, f64),
    axis: &Vector3<f64>,
) -> (Vec<Vector3<f64>>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let (u, v) = transverse_frame(axis);
    let a = axis.normalize();
    let (lo, hi) = cos_range;
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let dphi = 2.0 * PI / azimuth as f64;
    let mut dirs = Vec::with_capacity(order * azimuth);
    let mut wts = Vec::with_capacity(order * azimuth);
    for (xi, wi) in x.iter().zip(&w) {
        let c = mid + half * xi;
        let s = (1.0 - c * c).max(0.0).sqrt();
        for j in 0..azimuth {
            let phi = (j as f64 + 0.5) * dphi;
            let n = a * c + u * (s * phi.cos()) + v * (s * phi.sin());
            dirs.push(n.normalize());
            wts.push(wi * half * dphi);
        }
    }
    (dirs, wts)
}

/// Product rule with `order` Gauss–Legendre nodes in cos θ and `2 * order`
/// azimuthal nodes; exact for spherical polynomials of degree `2 * order - 1`.
pub fn sphere_quadrature(order: usize) -> Result<SphereQuadrature> {
    oriented_sphere_quadrature(order, 2 * order, &Vector3::z())
}

/// Product rule whose polar axis is `axis`, with independent polar and
/// azimuthal node counts. Integrands of the form `g(n·axis)` need only one
/// azimuthal node.
pub fn oriented_sphere_quadrature(order: usize, azimuth: usize, axis: &Vector3<f64>) -> Result<SphereQuadrature> {
    if order < 2 {
        return Err(Error::Argument(format!("sphere quadrature order must be at least 2, got {order}")));
    }
    if azimuth == 0 {
        return Err(Error::Argument("azimuthal node count must be positive".into()));
    }
    let norm = axis.norm();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::Argument("polar axis must be a finite nonzero vector".into()));
    }
    let (directions, weights) = product_rule(order, azimuth, (-1.0, 1.0), axis);
    Ok(SphereQuadrature { directions, weights, degree: (2 * order - 1).min(azimuth.saturating_sub(1)) })
}

/// Quadrature over the hemisphere `n·axis > 0` with `order` polar nodes and
/// `azimuth` azimuthal nodes. Weights sum to 2π.
pub fn hemisphere_quadrature(order: usize, azimuth: usize, axis: &Vector3<f64>) -> Result<SphereQuadrature> {
    if order < 1 || azimuth == 0 {
        return Err(Error::Argument("hemisphere quadrature needs positive node counts".into()));
    }
    let (directions, weights) = product_rule(order, azimuth, (0.0, 1.0), axis);
    Ok(SphereQuadrature { directions, weights, degree: (2 * order - 1).min(azimuth.saturating_sub(1)) })
}
