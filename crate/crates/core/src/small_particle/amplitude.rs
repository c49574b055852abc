use nalgebra::Vector3;
use num_complex::Complex64;

use super::polarizability::polarizability_from_factors;
use crate::error::{Error, Result};
use crate::geometry::{DepolarizationMode, EllipsoidShape, Orientation};
use crate::material::constants::EPS0;
use crate::material::PermittivityTable;
use crate::optics::{CVector3, EmissionAmplitudeProvider, PolarizationBasis};

/// Emission amplitude of a particle small against the thermal wavelength,
/// K_R^σ(n) = e_σ*(n)·Rα / 4πε₀V(ε − 1), independent of the source point.
#[derive(Debug, Clone)]
pub struct SmallParticleAmplitude {
    shape: EllipsoidShape,
    factors: Vector3<f64>,
    table: PermittivityTable,
}

impl SmallParticleAmplitude {
    pub fn new(shape: EllipsoidShape, table: PermittivityTable, mode: DepolarizationMode) -> Self {
        let factors = shape.depolarization_factors(mode);
        SmallParticleAmplitude { shape, factors, table }
    }

    /// Body-frame vector α e_body*/(4πε₀V(ε − 1)) with e_body = Rᵀe.
    fn body_amplitude(&self, e_body: &CVector3, omega: f64) -> Result<CVector3> {
        let eps = self.table.permittivity(omega)?;
        let chi = eps - 1.0;
        if chi.norm() == 0.0 {
            return Err(Error::Pole { axis: 0, eps_re: eps.re, eps_im: eps.im });
        }
        let v = self.shape.volume();
        let alpha = polarizability_from_factors(v, &self.factors, eps)?;
        let c = Complex64::new(1.0, 0.0) / (4.0 * std::f64::consts::PI * EPS0 * v * chi);
        Ok(alpha.eigenvalues.component_mul(&e_body.map(|z| z.conj())) * c)
    }
}

impl EmissionAmplitudeProvider for SmallParticleAmplitude {
    fn amplitude(
        &self,
        sigma: usize,
        basis: &PolarizationBasis,
        _s: &Vector3<f64>,
        omega: f64,
        orientation: &Orientation,
    ) -> Result<CVector3> {
        if sigma > 1 {
            return Err(Error::Argument(format!("polarization index must be 0 or 1, got {sigma}")));
        }
        let rt = orientation.matrix().transpose().map(|x| Complex64::new(x, 0.0));
        self.body_amplitude(&(rt * basis.e[sigma]), omega)
    }

    fn im_permittivity(&self, omega: f64) -> Result<f64> {
        Ok(self.table.permittivity(omega)?.im)
    }

    fn source_points(&self) -> Vec<(Vector3<f64>, f64)> {
        vec![(Vector3::zeros(), self.shape.volume())]
    }
}
