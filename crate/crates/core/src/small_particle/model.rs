use std::f64::consts::PI;

use nalgebra::{Matrix3, SMatrix, Vector3};
use num_complex::Complex64;

use super::polarizability::{polarizability_from_factors, PolarizabilityTensor};
use super::amplitude::SmallParticleAmplitude;
use super::via_k::localization_rate_via_k;
use super::{ComplexRate, HeatingRates};
use crate::error::{Error, Result};
use crate::geometry::{DepolarizationMode, Displacement, EllipsoidShape, Orientation};
use crate::material::constants::{C, EPS0, HBAR};
use crate::material::{bose_occupation, PermittivityTable, SpectralWindow};
use crate::numerics::{integrate_frequency, FrequencyGrid, Integration, QuadValue, SpectralSettings};
use crate::optics::im_green_coefficients;

type Vector6 = SMatrix<f64, 6, 1>;

/// Spectral photon emission rate γ_Ph(ω) sampled on a frequency list.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRateTable {
    /// (ω [rad/s], γ [1/s per rad/s]).
    pub pairs: Vec<(f64, f64)>,
}

/// Frequency-integrated per-axis rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRates {
    /// Γᵢ = ∫dω ω³n̄ αᵢ″/(3π²c³ε₀) [1/s]; their sum is the photon emission rate.
    pub gamma: Vector3<f64>,
    /// ∫dω ω⁵n̄ αᵢ″/(15π²c⁵ε₀) [1/(s m²)], the weights of linear momentum diffusion.
    pub gamma5: Vector3<f64>,
    /// Error estimate of the largest component.
    pub error: f64,
    pub converged: bool,
}

impl AxisRates {
    pub fn total(&self) -> f64 {
        self.gamma.sum()
    }
}

/// Second moments Qᵢ = ⟨(R eᵢ)⊗(R eᵢ)⟩ of the lab-frame principal axes,
/// which fix ⟨R α″ Rᵀ⟩ = Σᵢ αᵢ″ Qᵢ for a diagonal α.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientationMoments {
    q: [Matrix3<f64>; 3],
}

impl OrientationMoments {
    /// Validate: each Qᵢ symmetric positive semidefinite with unit trace, Σ Qᵢ = 𝟙.
    pub fn new(q: [Matrix3<f64>; 3]) -> Result<Self> {
        let tol = 1e-9;
        for (i, m) in q.iter().enumerate() {
            if (m - m.transpose()).abs().max() > tol {
                return Err(Error::Validation(format!("orientation moment {} is not symmetric", i + 1)));
            }
            if (m.trace() - 1.0).abs() > tol {
                return Err(Error::Validation(format!(
                    "orientation moment {} has trace {} (expected 1)",
                    i + 1,
                    m.trace()
                )));
            }
            let eig = m.symmetric_eigenvalues();
            if eig.min() < -tol {
                return Err(Error::Validation(format!("orientation moment {} is not positive semidefinite", i + 1)));
            }
        }
        let sum = q[0] + q[1] + q[2];
        if (sum - Matrix3::identity()).abs().max() > tol {
            return Err(Error::Validation("orientation moments do not sum to the identity".into()));
        }
        Ok(OrientationMoments { q })
    }

    /// A state with definite orientation R.
    pub fn point(r: &Orientation) -> Self {
        let q = [0, 1, 2].map(|i| {
            let a = r.body_axis(i);
            a * a.transpose()
        });
        OrientationMoments { q }
    }

    /// Uniformly distributed orientations.
    pub fn isotropic() -> Self {
        OrientationMoments { q: [Matrix3::identity() / 3.0; 3] }
    }

    /// Moments for a body with α₁″ = α₂″ from the symmetry-axis moment ⟨m⊗m⟩.
    pub fn from_symmetry_axis(mm: &Matrix3<f64>) -> Result<Self> {
        let rest = (Matrix3::identity() - mm) / 2.0;
        OrientationMoments::new([rest, rest, *mm])
    }

    pub fn moments(&self) -> &[Matrix3<f64>; 3] {
        &self.q
    }
}

/// ∂t⟨J⊗J⟩ = ħ² Σᵢ Γᵢ (𝟙 − Qᵢ) from per-axis rates [kg² m⁴/s³].
pub fn diffusion_from_axis_rates(gamma: &Vector3<f64>, moments: &OrientationMoments) -> Matrix3<f64> {
    let mut d = Matrix3::zeros();
    for i in 0..3 {
        d += (Matrix3::identity() - moments.q[i]) * gamma[i];
    }
    d * (HBAR * HBAR)
}

/// A homogeneous ellipsoid much smaller than the thermal wavelength at a
/// uniform internal temperature.
#[derive(Debug, Clone)]
pub struct SmallParticle {
    shape: EllipsoidShape,
    table: PermittivityTable,
    temperature: f64,
    mode: DepolarizationMode,
    factors: Vector3<f64>,
    window: SpectralWindow,
    grid: Option<FrequencyGrid>,
    settings: SpectralSettings,
}

impl SmallParticle {
    pub fn new(shape: EllipsoidShape, table: PermittivityTable, temperature: f64, mode: DepolarizationMode) -> Result<Self> {
        SmallParticle::with_settings(shape, table, temperature, mode, SpectralSettings::default())
    }

    pub fn with_settings(
        shape: EllipsoidShape,
        table: PermittivityTable,
        temperature: f64,
        mode: DepolarizationMode,
        settings: SpectralSettings,
    ) -> Result<Self> {
        if !(settings.rel_tol > 0.0 && settings.rel_tol < 1.0) {
            return Err(Error::Argument(format!("rel_tol must lie in (0, 1), got {}", settings.rel_tol)));
        }
        let window = SpectralWindow::new(&table, temperature)?;
        let grid = window.grid(&table, settings.policy);
        let factors = shape.depolarization_factors(mode);
        Ok(SmallParticle { shape, table, temperature, mode, factors, window, grid, settings })
    }

    pub fn shape(&self) -> &EllipsoidShape {
        &self.shape
    }

    pub fn table(&self) -> &PermittivityTable {
        &self.table
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn depolarization_mode(&self) -> DepolarizationMode {
        self.mode
    }

    pub fn depolarization_factors(&self) -> Vector3<f64> {
        self.factors
    }

    pub fn window(&self) -> &SpectralWindow {
        &self.window
    }

    pub fn settings(&self) -> SpectralSettings {
        self.settings
    }

    /// Frequency grid of all spectral integrals; `None` when the thermal
    /// window misses the material table.
    pub fn grid(&self) -> Option<&FrequencyGrid> {
        self.grid.as_ref()
    }

    pub fn warnings(&self) -> Vec<String> {
        self.window.warnings()
    }

    /// Same particle at another temperature.
    pub fn at_temperature(&self, temperature: f64) -> Result<Self> {
        SmallParticle::with_settings(self.shape, self.table.clone(), temperature, self.mode, self.settings)
    }

    /// Same material and temperature, another shape.
    pub fn with_shape(&self, shape: EllipsoidShape) -> Result<Self> {
        SmallParticle::with_settings(shape, self.table.clone(), self.temperature, self.mode, self.settings)
    }

    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        self.table.permittivity(omega)
    }

    pub fn polarizability(&self, omega: f64) -> Result<PolarizabilityTensor> {
        polarizability_from_factors(self.shape.volume(), &self.factors, self.table.permittivity(omega)?)
    }

    /// ω³n̄(ω)αᵢ″(ω)/(3π²c³ε₀) per principal axis.
    fn axis_spectrum(&self, omega: f64) -> Result<Vector3<f64>> {
        let alpha = self.polarizability(omega)?;
        let w = omega.powi(3) * bose_occupation(omega, self.temperature)? / (3.0 * PI * PI * C.powi(3) * EPS0);
        Ok(alpha.imag_eigenvalues() * w)
    }

    /// γ_Ph(ω) = ω³n̄ tr α″/(3π²c³ε₀) [1/s per rad/s].
    pub fn spectral_photon_rate(&self, omega: f64) -> Result<f64> {
        Ok(self.axis_spectrum(omega)?.sum())
    }

    /// γ_Ph at the table nodes inside the thermal window.
    pub fn spectral_table(&self) -> Result<SpectralRateTable> {
        let Some((lo, hi)) = self.window.range else {
            return Ok(SpectralRateTable { pairs: Vec::new() });
        };
        let pairs = self
            .table
            .omegas()
            .iter()
            .filter(|w| **w >= lo && **w <= hi)
            .map(|w| Ok((*w, self.spectral_photon_rate(*w)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralRateTable { pairs })
    }

    /// Integrate a spectral function over the thermal window. Errors raised
    /// inside the integrand are propagated; a miss of the window gives zero.
    pub fn integrate<T, F>(&self, mut f: F) -> Result<Integration<T>>
    where
        T: QuadValue,
        F: FnMut(f64) -> Result<T>,
    {
        let Some(grid) = &self.grid else {
            return Ok(Integration { value: T::zero(), error: 0.0, converged: true, evaluations: 0 });
        };
        let mut failure: Option<Error> = None;
        let r = integrate_frequency(
            |w| match f(w) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            },
            grid,
            self.settings.rel_tol,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(r)
    }

    /// Per-axis photon rates Γᵢ and momentum-diffusion weights.
    pub fn axis_rates(&self) -> Result<AxisRates> {
        let r = self.integrate(|w| {
            let g = self.axis_spectrum(w)?;
            let k2 = (w / C).powi(2) / 5.0;
            Ok(Vector6::from_column_slice(&[g[0], g[1], g[2], g[0] * k2, g[1] * k2, g[2] * k2]))
        })?;
        let v = r.value;
        Ok(AxisRates {
            gamma: Vector3::new(v[0], v[1], v[2]),
            gamma5: Vector3::new(v[3], v[4], v[5]),
            error: r.error,
            converged: r.converged,
        })
    }

    /// Γ_Ph = ∫dω γ_Ph(ω) [1/s].
    pub fn total_emission_rate(&self) -> Result<Integration<f64>> {
        self.integrate(|w| self.spectral_photon_rate(w))
    }

    /// Pure orientational localization rate F_{R,R′}(0) = Σᵢ Γᵢ (1 − (RᵀR′)ᵢᵢ).
    pub fn orientational_localization_rate(&self, r: &Orientation, r_prime: &Orientation) -> Result<f64> {
        let gamma = self.axis_rates()?.gamma;
        Ok(orientational_rate_from_axis_rates(&gamma, r, r_prime))
    }

    /// Localization rate at center-of-mass separation ΔX and orientations R, R′.
    ///
    /// The phase part vanishes identically for this amplitude: the angular
    /// integral of e^{ik n·ΔX}(𝟙 − n⊗n) is real and α α* is real diagonal.
    pub fn localization_rate_full(&self, r: &Orientation, r_prime: &Orientation, dx: &Displacement) -> Result<ComplexRate> {
        let rel = r_prime.matrix().transpose() * r.matrix();
        let dist = dx.norm();
        let (u, v) = if dist > 0.0 {
            let e = dx / dist;
            (r_prime.matrix().transpose() * e, r.matrix().transpose() * e)
        } else {
            (Vector3::zeros(), Vector3::zeros())
        };
        let res = self.integrate(|w| {
            let s = self.axis_spectrum(w)?;
            let (f, g) = im_green_coefficients(w / C * dist);
            // (6πc/ω) R′ᵀ Im G₀ R = (3/2)[f R′ᵀR + g (R′ᵀe)(Rᵀe)ᵀ]
            let mut acc = 0.0;
            for i in 0..3 {
                let m = 1.5 * (f * rel[(i, i)] + g * u[i] * v[i]);
                acc += s[i] * (1.0 - m);
            }
            Ok(acc)
        })?;
        if !res.converged {
            return Err(Error::Integration(format!(
                "localization rate did not reach rel_tol {} (estimate {:e})",
                self.settings.rel_tol, res.error
            )));
        }
        Ok(ComplexRate::new(res.value, 0.0))
    }

    /// Same rate evaluated from the emission amplitudes by direct
    /// quadrature over frequency, direction and polarization.
    pub fn localization_rate_via_k(&self, r: &Orientation, r_prime: &Orientation, dx: &Displacement) -> Result<ComplexRate> {
        let Some(grid) = &self.grid else {
            return Ok(ComplexRate::default());
        };
        let amp = SmallParticleAmplitude::new(self.shape, self.table.clone(), self.mode);
        localization_rate_via_k(&amp, grid, self.temperature, r, r_prime, dx)
    }

    /// Linear-rotor localization rate for symmetry axes m, m′ (unit vectors).
    pub fn linear_rotor_rate(&self, m: &Vector3<f64>, m_prime: &Vector3<f64>, dx: &Displacement) -> Result<ComplexRate> {
        for v in [m, m_prime] {
            if !((v.norm() - 1.0).abs() <= 1e-12) {
                return Err(Error::Argument(format!("rotor axis must be a unit vector, |m| = {}", v.norm())));
            }
        }
        let dist = dx.norm();
        let (pm, pmp) = if dist > 0.0 { (m.dot(dx) / dist, m_prime.dot(dx) / dist) } else { (0.0, 0.0) };
        let mm = m.dot(m_prime);
        let res = self.integrate(|w| {
            let s = self.axis_spectrum(w)?;
            let (f, g) = im_green_coefficients(w / C * dist);
            Ok(s[2] * (1.0 - 1.5 * (f * mm + g * pm * pmp)))
        })?;
        Ok(ComplexRate::new(res.value, 0.0))
    }

    /// Γ_or = ∫dω ω³n̄ α₃″/(3π²c³ε₀), the rate of the linear-rotor generator.
    pub fn rotor_rate(&self) -> Result<f64> {
        Ok(self.axis_rates()?.gamma[2])
    }

    /// ∂t⟨J⊗J⟩ for a state with orientation moments `moments` [kg² m⁴/s³].
    pub fn angular_momentum_diffusion(&self, moments: &OrientationMoments) -> Result<Matrix3<f64>> {
        Ok(diffusion_from_axis_rates(&self.axis_rates()?.gamma, moments))
    }

    /// Rotational and center-of-mass heating rates along the principal axes [W].
    pub fn heating_rates(&self) -> Result<HeatingRates> {
        Ok(heating_from_axis_rates(&self.axis_rates()?, &self.shape))
    }
}

pub(crate) fn orientational_rate_from_axis_rates(gamma: &Vector3<f64>, r: &Orientation, r_prime: &Orientation) -> f64 {
    let rel = r.relative_to(r_prime);
    (0..3).map(|i| gamma[i] * (1.0 - rel[(i, i)])).sum::<f64>().max(0.0)
}

/// h_rot^i = ħ²(Γ_Ph − Γᵢ)/2Iᵢ and h_cm^j = ħ²(2 Σᵢ Γ5ᵢ − Γ5ⱼ)/2m.
pub fn heating_from_axis_rates(rates: &AxisRates, shape: &EllipsoidShape) -> HeatingRates {
    let inertia = shape.moments_of_inertia();
    let total = rates.gamma.sum();
    let total5 = rates.gamma5.sum();
    let hh = HBAR * HBAR;
    HeatingRates {
        h_rot: Vector3::from_fn(|i, _| hh / (2.0 * inertia[i]) * (total - rates.gamma[i])),
        h_cm: Vector3::from_fn(|j, _| hh / (2.0 * shape.mass()) * (2.0 * total5 - rates.gamma5[j])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::constants::{AMU, K_B};

    fn lorentz_table() -> PermittivityTable {
        // Lorentz oscillator near the 1000 K thermal peak.
        let w0 = 2.0e14;
        let gamma = 2.0e13;
        let wp2 = 1.0e28;
        let samples = (0..400).map(|i| {
            let w = 1e13 * (1e3f64).powf(i as f64 / 399.0);
            let eps = Complex64::new(2.0, 0.0) + wp2 / Complex64::new(w0 * w0 - w * w, -gamma * w);
            (w, eps)
        });
        PermittivityTable::from_samples("lorentz", "", samples).unwrap()
    }

    fn sphere(radius: f64) -> EllipsoidShape {
        EllipsoidShape::with_density(radius, radius, radius, 2200.0).unwrap()
    }

    #[test]
    fn lossless_material_does_not_emit() {
        let t = lorentz_table().map("lossless", |_, e| Complex64::new(e.re.abs() + 1.0, 0.0)).unwrap();
        let p = SmallParticle::new(sphere(5e-8), t, 1000.0, DepolarizationMode::Exact).unwrap();
        assert_eq!(p.spectral_photon_rate(2e14).unwrap(), 0.0);
        assert_eq!(p.total_emission_rate().unwrap().value, 0.0);
    }

    #[test]
    fn emission_is_linear_in_volume() {
        let a = SmallParticle::new(sphere(5e-8), lorentz_table(), 1000.0, DepolarizationMode::Exact).unwrap();
        let b = a.with_shape(sphere(5e-8 * 2f64.cbrt())).unwrap();
        let w = 2.1e14;
        assert!((b.spectral_photon_rate(w).unwrap() / a.spectral_photon_rate(w).unwrap() - 2.0).abs() < 1e-12);
        let ga = a.total_emission_rate().unwrap().value;
        let gb = b.total_emission_rate().unwrap().value;
        assert!((gb / ga - 2.0).abs() < 1e-9);
    }

    #[test]
    fn cold_particle_does_not_emit() {
        let a = SmallParticle::new(sphere(5e-8), lorentz_table(), 1.0, DepolarizationMode::Exact).unwrap();
        assert!(a.window().range.is_none());
        assert_eq!(a.total_emission_rate().unwrap().value, 0.0);
        assert!(!a.warnings().is_empty());
    }

    #[test]
    fn sphere_rates_are_isotropic() {
        let p = SmallParticle::new(sphere(5e-8), lorentz_table(), 800.0, DepolarizationMode::Exact).unwrap();
        let r = p.axis_rates().unwrap();
        assert!(r.converged);
        assert!((r.gamma[0] - r.gamma[1]).abs() <= 1e-12 * r.gamma[0]);
        let h = p.heating_rates().unwrap();
        assert!((h.h_rot[0] - h.h_rot[2]).abs() <= 1e-10 * h.h_rot[0]);
        assert!((h.h_cm[1] - h.h_cm[2]).abs() <= 1e-10 * h.h_cm[0]);
        // h_rot = (ħ²/2I)(2/3)Γ_Ph for a sphere
        let total = p.total_emission_rate().unwrap().value;
        let i = p.shape().moments_of_inertia()[0];
        assert!((h.h_rot[0] - HBAR * HBAR / (2.0 * i) * 2.0 / 3.0 * total).abs() <= 1e-9 * h.h_rot[0]);
    }

    #[test]
    fn diffusion_trace_and_rank_one_axis() {
        let gamma = Vector3::new(0.0, 0.0, 1.0);
        let d = diffusion_from_axis_rates(&gamma, &OrientationMoments::point(&Orientation::identity()));
        assert_eq!(d[(2, 2)], 0.0);
        assert_eq!(d[(0, 0)], HBAR * HBAR);

        let gamma = Vector3::new(1.0, 2.0, 4.0);
        let r = Orientation::from_axis_angle(&Vector3::new(0.6, 0.0, 0.8), 1.1).unwrap();
        let d = diffusion_from_axis_rates(&gamma, &OrientationMoments::point(&r));
        assert!((d.trace() - 2.0 * HBAR * HBAR * gamma.sum()).abs() < 1e-12 * d.trace());
        let iso = diffusion_from_axis_rates(&gamma, &OrientationMoments::isotropic());
        assert!((iso - Matrix3::identity() * (HBAR * HBAR * 2.0 / 3.0 * gamma.sum())).abs().max() < 1e-80);
    }

    #[test]
    fn inconsistent_moments_are_rejected() {
        let bad = [Matrix3::identity() / 2.0, Matrix3::identity() / 4.0, Matrix3::identity() / 4.0];
        assert!(matches!(OrientationMoments::new(bad), Err(Error::Validation(_))));
        let neg = Matrix3::from_diagonal(&Vector3::new(1.5, -0.25, -0.25));
        let rest = (Matrix3::identity() - neg) / 2.0;
        assert!(OrientationMoments::new([neg, rest, rest]).is_err());
        let mm = Matrix3::from_diagonal(&Vector3::new(0.2, 0.3, 0.5));
        assert!(OrientationMoments::from_symmetry_axis(&mm).is_ok());
    }

    #[test]
    fn full_rate_reduces_to_orientational_rate() {
        let shape = EllipsoidShape::with_density(4e-8, 6e-8, 9e-8, 2200.0).unwrap();
        let p = SmallParticle::new(shape, lorentz_table(), 1000.0, DepolarizationMode::Exact).unwrap();
        let r = Orientation::from_axis_angle(&Vector3::new(0.0, 0.6, 0.8), 0.4).unwrap();
        let rp = Orientation::from_axis_angle(&Vector3::new(1.0, 0.0, 0.0), 2.0).unwrap();
        let full = p.localization_rate_full(&r, &rp, &Vector3::zeros()).unwrap();
        let or = p.orientational_localization_rate(&r, &rp).unwrap();
        assert!((full.re - or).abs() <= 1e-10 * or);
        assert_eq!(full.im, 0.0);
    }

    #[test]
    fn linear_rotor_limits() {
        let shape = EllipsoidShape::with_density(3e-8, 3e-8, 9e-8, 2200.0).unwrap();
        let p = SmallParticle::new(shape, lorentz_table(), 1000.0, DepolarizationMode::Exact).unwrap();
        let g = p.rotor_rate().unwrap();
        let z = Vector3::z();
        let x = Vector3::x();
        assert!(p.linear_rotor_rate(&z, &z, &Vector3::zeros()).unwrap().re.abs() <= 1e-12 * g);
        assert!((p.linear_rotor_rate(&z, &x, &Vector3::zeros()).unwrap().re - g).abs() <= 1e-9 * g);
        let m = Vector3::new(0.0, 0.6, 0.8);
        let f = p.linear_rotor_rate(&z, &m, &Vector3::zeros()).unwrap().re;
        assert!((f - g * (1.0 - 0.8)).abs() <= 1e-9 * g);
        assert!(p.linear_rotor_rate(&(z * 2.0), &m, &Vector3::zeros()).is_err());
    }

    #[test]
    fn benchmark_inertia_mass_is_consistent() {
        let _ = K_B;
        let s = EllipsoidShape::sphere(56.5e-9, 1e9 * AMU).unwrap();
        assert!((s.density() - 2_196.0).abs() < 10.0);
    }
}
