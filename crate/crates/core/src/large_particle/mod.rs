//! Bodies much larger than the thermal wavelength: emission from the surface
//! through Fresnel transmission.

mod emission;
mod fresnel;
mod surface;

pub use emission::{
    black_body_photon_flux, bose_fourth_moment, surface_photon_intensity, LargeParticle, SurfaceEmissivity,
    ValidityReport,
};
pub use fresnel::{
    fresnel, interior_polarizations, jump_factor, jump_factor_closed_form, wavevector_normal, FresnelSet,
};
pub use surface::{ParametricSpheroidSurface, SurfacePatch};
