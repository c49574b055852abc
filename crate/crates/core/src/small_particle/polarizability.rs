use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{DepolarizationMode, EllipsoidShape};
use crate::material::constants::EPS0;

/// Polarizability of a homogeneous ellipsoid, diagonal in its body frame [C m²/V].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizabilityTensor {
    /// Principal values α₁, α₂, α₃.
    pub eigenvalues: Vector3<Complex64>,
}

impl PolarizabilityTensor {
    /// Body-frame matrix.
    pub fn matrix(&self) -> Matrix3<Complex64> {
        Matrix3::from_diagonal(&self.eigenvalues)
    }

    /// Principal values of α″ = (α − α†)/2i.
    pub fn imag_eigenvalues(&self) -> Vector3<f64> {
        self.eigenvalues.map(|a| a.im)
    }

    /// α″ as a body-frame matrix.
    pub fn anti_hermitian_part(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&self.imag_eigenvalues())
    }

    pub fn trace_imag(&self) -> f64 {
        self.imag_eigenvalues().sum()
    }
}

/// αᵢ = ε₀V(ε − 1)/(1 + Lᵢ(ε − 1)) for given depolarization factors.
pub fn polarizability_from_factors(volume: f64, factors: &Vector3<f64>, eps: Complex64) -> Result<PolarizabilityTensor> {
    if eps.im < 0.0 {
        return Err(Error::Argument(format!("Im eps must be nonnegative, got {}", eps.im)));
    }
    let chi = eps - 1.0;
    let mut eigenvalues = Vector3::zeros();
    for i in 0..3 {
        let denom = 1.0 + factors[i] * chi;
        if denom.norm() <= 1e-14 {
            return Err(Error::Pole { axis: i + 1, eps_re: eps.re, eps_im: eps.im });
        }
        eigenvalues[i] = EPS0 * volume * chi / denom;
    }
    Ok(PolarizabilityTensor { eigenvalues })
}

pub fn polarizability(shape: &EllipsoidShape, eps: Complex64, mode: DepolarizationMode) -> Result<PolarizabilityTensor> {
    polarizability_from_factors(shape.volume(), &shape.depolarization_factors(mode), eps)
}
