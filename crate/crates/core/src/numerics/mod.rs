//! Quadrature building blocks: Gauss rules, adaptive Gauss–Kronrod
//! integration, frequency grids and solid-angle rules.

mod adaptive;
mod frequency;
mod gauss;
mod sphere;

pub use adaptive::{integrate_adaptive, integrate_interval, Integration, QuadValue};
pub use frequency::{integrate_frequency, FrequencyGrid, RefinementPolicy, SpectralSettings};
pub use gauss::gauss_legendre;
pub use sphere::{hemisphere_quadrature, oriented_sphere_quadrature, sphere_quadrature, SphereQuadrature};


pub(crate) use sphere::transverse_frame;
