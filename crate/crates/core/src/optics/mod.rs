//! Free-space Green tensor, polarization bases and emission amplitudes.

mod amplitude;
mod green;
mod polarization;

pub use amplitude::EmissionAmplitudeProvider;
pub use green::{free_green, im_free_green, im_green_coefficients, GreenTensor3, SERIES_SWITCH};
pub use polarization::{polarization_basis, polarization_basis_with, CVector3, PolarizationBasis, PolarizationGauge};
