//! Emission amplitudes K_R^σ(n, s; ω).

use nalgebra::Vector3;

use super::polarization::{CVector3, PolarizationBasis};
use crate::error::Result;
use crate::geometry::Orientation;

/// Source of emission amplitudes for the general localization rate.
///
/// Implementations must be rotation covariant: the amplitude for orientation
/// R, direction n and polarization e_σ equals e_σ*·R A(Rᵀn, s), with A the
/// amplitude tensor of the body in reference orientation.
pub trait EmissionAmplitudeProvider {
    /// K_R^σ for polarization `sigma` of `basis` at body-frame source point `s`.
    fn amplitude(
        &self,
        sigma: usize,
        basis: &PolarizationBasis,
        s: &Vector3<f64>,
        omega: f64,
        orientation: &Orientation,
    ) -> Result<CVector3>;

    /// Im ε_r(ω) of the emitting material.
    fn im_permittivity(&self, omega: f64) -> Result<f64>;

    /// Body-frame quadrature of the emitting volume: points and weights [m³].
    fn source_points(&self) -> Vec<(Vector3<f64>, f64)>;
}
