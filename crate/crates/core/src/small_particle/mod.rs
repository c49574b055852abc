//! Thermal emission and decoherence of particles small against the thermal
//! wavelength, described by their polarizability tensor.

mod amplitude;
mod model;
mod polarizability;
mod via_k;

use nalgebra::Vector3;

pub use amplitude::SmallParticleAmplitude;
pub use model::{
    diffusion_from_axis_rates, heating_from_axis_rates, AxisRates, OrientationMoments, SmallParticle,
    SpectralRateTable,
};
pub use polarizability::{polarizability, polarizability_from_factors, PolarizabilityTensor};
pub use via_k::localization_rate_via_k;

/// Localization rate with its phase part, F = re + i·im [1/s].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexRate {
    pub re: f64,
    pub im: f64,
}

impl ComplexRate {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexRate { re, im }
    }
}

/// Heating rates along the principal axes [W].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatingRates {
    /// Rotational energy gain about body axis i.
    pub h_rot: Vector3<f64>,
    /// Center-of-mass kinetic energy gain along body axis j.
    pub h_cm: Vector3<f64>,
}

impl HeatingRates {
    pub fn total(&self) -> f64 {
        self.h_rot.sum() + self.h_cm.sum()
    }
}
