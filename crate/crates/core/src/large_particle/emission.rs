use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::{SMatrix, Vector3};
use num_complex::Complex64;

use super::fresnel::fresnel;
use super::surface::{ParametricSpheroidSurface, SurfacePatch};
use crate::error::{Error, Result};
use crate::geometry::{Displacement, EllipsoidShape, Orientation};
use crate::material::constants::{C, HBAR, K_B};
use crate::material::{bose_occupation, PermittivityTable, SpectralWindow};
use crate::numerics::{
    gauss_legendre, integrate_frequency, transverse_frame, FrequencyGrid, Integration, QuadValue, SpectralSettings,
};
use crate::small_particle::{ComplexRate, HeatingRates};

const ZETA3: f64 = 1.202_056_903_159_594_3;
const ZETA5: f64 = 1.036_927_755_143_37;

type Vector7 = SMatrix<f64, 7, 1>;

/// Emission law of the surface.
#[derive(Debug, Clone)]
pub enum SurfaceEmissivity {
    /// T_s = T_p = 1 for every direction and frequency.
    BlackBody,
    /// Fresnel transmission of a homogeneous dielectric.
    Dielectric(PermittivityTable),
}

impl SurfaceEmissivity {
    /// T_s + T_p for emission at cos θ = `cos_theta` from the local normal.
    pub fn transmission_sum(&self, cos_theta: f64, omega: f64) -> Result<f64> {
        if cos_theta <= 0.0 {
            return Ok(0.0);
        }
        match self {
            SurfaceEmissivity::BlackBody => Ok(2.0),
            SurfaceEmissivity::Dielectric(table) => {
                let c = cos_theta.min(1.0);
                let n = Vector3::new((1.0 - c * c).sqrt(), 0.0, c);
                Ok(fresnel(&n, &Vector3::z(), table.permittivity(omega)?, omega)?.transmission_sum())
            }
        }
    }
}

/// Φ_s = (ω²/8π³c²) n̄ (T_s + T_p) n⊥ Θ(n⊥) [photons/(s sr m² (rad/s))].
pub fn surface_photon_intensity(
    n: &Vector3<f64>,
    patch: &SurfacePatch,
    emissivity: &SurfaceEmissivity,
    omega: f64,
    temperature: f64,
) -> Result<f64> {
    let n_perp = n.dot(&patch.e_perp);
    if n_perp <= 0.0 {
        return Ok(0.0);
    }
    let t = emissivity.transmission_sum(n_perp, omega)?;
    Ok(omega * omega / (8.0 * PI.powi(3) * C * C) * bose_occupation(omega, temperature)? * t * n_perp)
}

/// Black-body photon flux per unit area, ζ(3)(k_BT/ħ)³/(2π²c²) [1/(s m²)].
pub fn black_body_photon_flux(temperature: f64) -> f64 {
    ZETA3 * (K_B * temperature / HBAR).powi(3) / (2.0 * PI * PI * C * C)
}

/// ∫dω ω⁴ n̄ = 24ζ(5)(k_BT/ħ)⁵ [rad⁵/s⁵].
pub fn bose_fourth_moment(temperature: f64) -> f64 {
    24.0 * ZETA5 * (K_B * temperature / HBAR).powi(5)
}

/// Characteristic scales of a surface emitter at its thermal peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    /// Volume-equivalent size estimate √(A/4π) [m].
    pub size: f64,
    /// 2πc/ω_peak [m].
    pub thermal_wavelength: f64,
    /// c/(2ω_peak Im√ε) at the peak; `None` for a black body.
    pub absorption_length: Option<f64>,
    /// Smallest radius of curvature estimate, min |r_s| [m].
    pub min_radius: f64,
}

impl ValidityReport {
    pub fn size_over_wavelength(&self) -> f64 {
        self.size / self.thermal_wavelength
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "size                 {:.4e} m", self.size)?;
        writeln!(f, "thermal wavelength   {:.4e} m", self.thermal_wavelength)?;
        writeln!(f, "size / wavelength    {:.4}", self.size_over_wavelength())?;
        writeln!(f, "min radius / wavelength {:.4}", self.min_radius / self.thermal_wavelength)?;
        match self.absorption_length {
            Some(l) => write!(f, "absorption length    {:.4e} m (size / length {:.4})", l, self.size / l),
            None => write!(f, "absorption length    0 (black body)"),
        }
    }
}

/// Body much larger than the thermal wavelength, radiating from its surface.
#[derive(Debug, Clone)]
pub struct LargeParticle {
    patches: Vec<SurfacePatch>,
    emissivity: SurfaceEmissivity,
    temperature: f64,
    mass: f64,
    inertia: Vector3<f64>,
    hemisphere: (usize, usize),
    settings: SpectralSettings,
    window: SpectralWindow,
    grid: Option<FrequencyGrid>,
}

impl LargeParticle {
    pub fn new(
        patches: Vec<SurfacePatch>,
        emissivity: SurfaceEmissivity,
        temperature: f64,
        mass: f64,
        inertia: Vector3<f64>,
    ) -> Result<Self> {
        if patches.is_empty() {
            return Err(Error::Argument("surface has no patches".into()));
        }
        if !(mass.is_finite() && mass > 0.0) || inertia.iter().any(|i| !(i.is_finite() && *i > 0.0)) {
            return Err(Error::Argument("mass and moments of inertia must be positive".into()));
        }
        let settings = SpectralSettings::default();
        let (window, grid) = match &emissivity {
            SurfaceEmissivity::BlackBody => {
                let w = SpectralWindow::unbounded(temperature)?;
                let (lo, hi) = w.thermal;
                let g = FrequencyGrid::log_spaced(lo, hi, 8, settings.policy)?.with_max_ratio(1.25);
                (w, Some(g))
            }
            SurfaceEmissivity::Dielectric(table) => {
                let w = SpectralWindow::new(table, temperature)?;
                let g = w.grid(table, settings.policy);
                (w, g)
            }
        };
        Ok(LargeParticle { patches, emissivity, temperature, mass, inertia, hemisphere: (24, 8), settings, window, grid })
    }

    /// Spheroidal body (ℓ₁ = ℓ₂) with a `polar × azimuth` surface tiling.
    pub fn spheroid(
        shape: &EllipsoidShape,
        emissivity: SurfaceEmissivity,
        temperature: f64,
        polar: usize,
        azimuth: usize,
    ) -> Result<Self> {
        let surface = ParametricSpheroidSurface::from_shape(shape, polar, azimuth)?;
        LargeParticle::new(surface.patches(), emissivity, temperature, shape.mass(), shape.moments_of_inertia())
    }

    /// Relative tolerance and refinement policy of the frequency integrals.
    pub fn with_settings(mut self, settings: SpectralSettings) -> Result<Self> {
        if !(settings.rel_tol > 0.0 && settings.rel_tol < 1.0) {
            return Err(Error::Argument(format!("rel_tol must lie in (0, 1), got {}", settings.rel_tol)));
        }
        self.settings = settings;
        self.grid = self.grid.map(|g| FrequencyGrid::new(g.nodes().to_vec(), settings.policy).expect("grid was valid"));
        Ok(self)
    }

    /// Gauss–Legendre nodes in cos θ and azimuthal nodes of the per-patch
    /// emission hemisphere.
    pub fn with_hemisphere_order(mut self, polar: usize, azimuth: usize) -> Result<Self> {
        if polar < 1 || azimuth < 3 {
            return Err(Error::Argument("hemisphere quadrature needs at least 1 polar and 3 azimuthal nodes".into()));
        }
        self.hemisphere = (polar, azimuth);
        Ok(self)
    }

    pub fn patches(&self) -> &[SurfacePatch] {
        &self.patches
    }

    pub fn emissivity(&self) -> &SurfaceEmissivity {
        &self.emissivity
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn window(&self) -> &SpectralWindow {
        &self.window
    }

    pub fn warnings(&self) -> Vec<String> {
        self.window.warnings()
    }

    pub fn surface_area(&self) -> f64 {
        self.patches.iter().map(|p| p.area).sum()
    }

    fn integrate<T: QuadValue>(&self, f: impl FnMut(f64) -> Result<T>) -> Result<Integration<T>> {
        let Some(grid) = &self.grid else {
            return Ok(Integration { value: T::zero(), error: 0.0, converged: true, evaluations: 0 });
        };
        let mut f = f;
        let mut failure = None;
        let r = integrate_frequency(
            |w| {
                f(w).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    T::zero()
                })
            },
            grid,
            self.settings.rel_tol,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }

    /// Per polar node of the hemisphere rule: the surface and azimuth sums of
    /// the direction-dependent factors. T_s + T_p depends on the direction
    /// only through cos θ, so these sums are frequency independent.
    /// Columns: emission weight, (e_j·n)² for j = 1..3, (e_j·(r_s×n))².
    fn hemisphere_moments(&self) -> (Vec<f64>, Vec<Vector7>) {
        let (order, azimuth) = self.hemisphere;
        let (x, w) = gauss_legendre(order);
        let dphi = 2.0 * PI / azimuth as f64;
        let mut cosines = Vec::with_capacity(order);
        let mut sums = Vec::with_capacity(order);
        for (xi, wi) in x.iter().zip(&w) {
            let u = 0.5 * (1.0 + xi);
            let s = (1.0 - u * u).sqrt();
            let mut acc = Vector7::zeros();
            for p in &self.patches {
                let (t1, t2) = transverse_frame(&p.e_perp);
                let weight = p.area * 0.5 * wi * dphi * u;
                for j in 0..azimuth {
                    let (sp, cp) = ((j as f64 + 0.5) * dphi).sin_cos();
                    let n = p.e_perp * u + t1 * (s * cp) + t2 * (s * sp);
                    let l = p.r_s.cross(&n);
                    acc += Vector7::from_column_slice(&[
                        1.0,
                        n.x * n.x,
                        n.y * n.y,
                        n.z * n.z,
                        l.x * l.x,
                        l.y * l.y,
                        l.z * l.z,
                    ]) * weight;
                }
            }
            cosines.push(u);
            sums.push(acc);
        }
        (cosines, sums)
    }

    /// ∫dΩ∫dA Φ_s times (1, (ω/c)²(e_j·n)², (ω/c)²(e_j·(r_s×n))²).
    fn spectral_moments(&self, omega: f64, cosines: &[f64], sums: &[Vector7]) -> Result<Vector7> {
        let pre = omega * omega / (8.0 * PI.powi(3) * C * C) * bose_occupation(omega, self.temperature)?;
        let k2 = (omega / C).powi(2);
        let mut acc = Vector7::zeros();
        for (u, m) in cosines.iter().zip(sums) {
            acc += m * self.emissivity.transmission_sum(*u, omega)?;
        }
        let mut out = acc * pre;
        for i in 1..7 {
            out[i] *= k2;
        }
        Ok(out)
    }

    /// Γ = ∫dω∫dΩ∫dA Φ_s [1/s].
    pub fn total_emission_rate(&self) -> Result<Integration<f64>> {
        let (cosines, sums) = self.hemisphere_moments();
        self.integrate(|w| Ok(self.spectral_moments(w, &cosines, &sums)?[0]))
    }

    /// Recoil heating of the center of mass along and rotation about the body axes [W].
    pub fn heating_rates(&self) -> Result<HeatingRates> {
        let (cosines, sums) = self.hemisphere_moments();
        let r = self.integrate(|w| self.spectral_moments(w, &cosines, &sums))?;
        let v = r.value;
        let hh = HBAR * HBAR;
        Ok(HeatingRates {
            h_cm: Vector3::new(v[1], v[2], v[3]) * (hh / (2.0 * self.mass)),
            h_rot: Vector3::from_fn(|j, _| v[4 + j] * hh / (2.0 * self.inertia[j])),
        })
    }

    /// F = ∫dω∫dΩ∫dA Φ_s [1 − e^{−ik n·(ΔX + (R − R′) r_s)}] for orientations close
    /// to the reference orientation; the caller is responsible for ‖R − 𝟙‖ ≪ 1.
    pub fn well_oriented_rate(&self, r: &Orientation, r_prime: &Orientation, dx: &Displacement) -> Result<ComplexRate> {
        let delta = r.matrix() - r_prime.matrix();
        let shifts: Vec<Vector3<f64>> = self.patches.iter().map(|p| dx + delta * p.r_s).collect();
        if shifts.iter().all(|d| d.norm() == 0.0) {
            return Ok(ComplexRate::default());
        }
        let reach = shifts.iter().map(|d| d.norm()).fold(0.0, f64::max);
        // Per patch the azimuthal integral about e⊥ is closed form:
        // ∫dφ e^{−ik n·d} = 2π e^{−iku d⊥} J₀(k s |d_t|), s = √(1 − u²).
        let split: Vec<(f64, f64)> = self
            .patches
            .iter()
            .zip(&shifts)
            .map(|(p, d)| {
                let normal = d.dot(&p.e_perp);
                (normal, (d - p.e_perp * normal).norm())
            })
            .collect();
        let mut rules: HashMap<usize, (Vec<f64>, Vec<f64>)> = HashMap::new();
        let res = self.integrate(|omega| -> Result<Complex64> {
            let k = omega / C;
            let order = self.hemisphere.0.max((k * reach).ceil() as usize + 24);
            let (x, w) = rules.entry(order).or_insert_with(|| gauss_legendre(order));
            let pre = omega * omega / (8.0 * PI.powi(3) * C * C) * bose_occupation(omega, self.temperature)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (xi, wi) in x.iter().zip(w.iter()) {
                let u = 0.5 * (1.0 + xi);
                let s = (1.0 - u * u).sqrt();
                let t = self.emissivity.transmission_sum(u, omega)?;
                let mut ring = Complex64::new(0.0, 0.0);
                for (p, (dn, dt)) in self.patches.iter().zip(&split) {
                    let j0 = libm::j0(k * s * dt);
                    let (sin, cos) = (k * u * dn).sin_cos();
                    ring += Complex64::new(1.0 - j0 * cos, j0 * sin) * p.area;
                }
                acc += ring * (PI * wi * u * t);
            }
            Ok(acc * pre)
        })?;
        if !res.converged {
            return Err(Error::Integration(format!(
                "well-oriented rate did not reach rel_tol {} (estimate {:e})",
                self.settings.rel_tol, res.error
            )));
        }
        Ok(ComplexRate::new(res.value.re, res.value.im))
    }

    pub fn diagnostics(&self) -> Result<ValidityReport> {
        let peak = self.window.peak_omega;
        let absorption_length = match &self.emissivity {
            SurfaceEmissivity::BlackBody => None,
            SurfaceEmissivity::Dielectric(table) => {
                let (lo, hi) = table.support();
                let eps = table.permittivity(peak.clamp(lo, hi))?;
                let im = eps.sqrt().im;
                Some(if im > 0.0 { C / (2.0 * peak * im) } else { f64::INFINITY })
            }
        };
        Ok(ValidityReport {
            size: (self.surface_area() / (4.0 * PI)).sqrt(),
            thermal_wavelength: 2.0 * PI * C / peak,
            absorption_length,
            min_radius: self.patches.iter().map(|p| p.r_s.norm()).fold(f64::INFINITY, f64::min),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::constants::AMU;

    fn black_sphere(radius: f64, t: f64) -> LargeParticle {
        let shape = EllipsoidShape::sphere(radius, 1e10 * AMU).unwrap();
        LargeParticle::spheroid(&shape, SurfaceEmissivity::BlackBody, t, 8, 16).unwrap()
    }

    #[test]
    fn backward_directions_do_not_emit() {
        let patch = SurfacePatch::new(Vector3::zeros(), Vector3::z(), 1.0).unwrap();
        let n = Vector3::new(0.6, 0.0, -0.8);
        assert_eq!(surface_photon_intensity(&n, &patch, &SurfaceEmissivity::BlackBody, 1e14, 300.0).unwrap(), 0.0);
    }

    #[test]
    fn black_body_intensity_is_lambertian() {
        let patch = SurfacePatch::new(Vector3::zeros(), Vector3::z(), 1.0).unwrap();
        let a = surface_photon_intensity(&Vector3::z(), &patch, &SurfaceEmissivity::BlackBody, 1e14, 300.0).unwrap();
        let n = Vector3::new(0.8, 0.0, 0.6);
        let b = surface_photon_intensity(&n, &patch, &SurfaceEmissivity::BlackBody, 1e14, 300.0).unwrap();
        assert!((b / a - 0.6).abs() < 1e-14);
        let want = 1e28 / (8.0 * PI.powi(3) * C * C) * bose_occupation(1e14, 300.0).unwrap() * 2.0;
        assert!((a - want).abs() < 1e-14 * want);
    }

    #[test]
    fn black_body_sphere_flux() {
        let p = black_sphere(5e-6, 300.0);
        let want = 4.0 * PI * 25e-12 * black_body_photon_flux(300.0);
        let got = p.total_emission_rate().unwrap().value;
        assert!((got / want - 1.0).abs() < 1e-8, "{got} vs {want}");
        assert!((black_body_photon_flux(1.0) - 1.5205e15).abs() < 1e11);
    }

    #[test]
    fn black_body_rate_scales_with_cube_of_temperature() {
        let a = black_sphere(5e-6, 300.0).total_emission_rate().unwrap().value;
        let b = black_sphere(5e-6, 600.0).total_emission_rate().unwrap().value;
        assert!((b / a - 8.0).abs() < 8e-6);
    }

    #[test]
    fn black_body_sphere_center_of_mass_heating() {
        let (a, t) = (5e-6, 300.0);
        let p = black_sphere(a, t);
        let h = p.heating_rates().unwrap();
        let m = 1e10 * AMU;
        let want = HBAR * HBAR / (2.0 * m) * 4.0 * PI * a * a / 3.0 / (C * C) * bose_fourth_moment(t) / (4.0 * PI * PI * C * C);
        for j in 0..3 {
            assert!((h.h_cm[j] / want - 1.0).abs() < 1e-8, "{} vs {want}", h.h_cm[j]);
        }
        assert!(h.h_rot.iter().all(|x| *x >= 0.0));
    }

    #[test]
    fn coincident_states_give_zero() {
        let p = black_sphere(5e-6, 300.0);
        let r = Orientation::about_axis(2, 0.01);
        assert_eq!(p.well_oriented_rate(&r, &r, &Vector3::zeros()).unwrap(), ComplexRate::default());
    }

    #[test]
    fn well_oriented_rate_matches_direct_quadrature() {
        // Oracle: explicit hemisphere rule per patch, Φ_s from the public
        // intensity function, fixed Gauss–Legendre rule in frequency.
        use crate::numerics::hemisphere_quadrature;
        let shape = EllipsoidShape::spheroid(3e-6, 2e-6, 1e-13).unwrap();
        let p = LargeParticle::spheroid(&shape, SurfaceEmissivity::BlackBody, 300.0, 6, 10).unwrap();
        let r = Orientation::about_axis(0, 0.02);
        let rp = Orientation::about_axis(1, -0.01);
        let dx = Vector3::new(1e-6, -0.5e-6, 2e-6);
        let got = p.well_oriented_rate(&r, &rp, &dx).unwrap();

        let delta = r.matrix() - rp.matrix();
        let grid = p.grid.as_ref().unwrap();
        let mut want = Complex64::new(0.0, 0.0);
        for (omega, w) in grid.gauss_rule(6) {
            let k = omega / C;
            for patch in p.patches() {
                let d = dx + delta * patch.r_s;
                let hemi = hemisphere_quadrature(24, 40, &patch.e_perp).unwrap();
                for (n, wn) in hemi.iter() {
                    let phi = surface_photon_intensity(n, patch, &SurfaceEmissivity::BlackBody, omega, 300.0).unwrap();
                    let e = Complex64::from_polar(1.0, -k * n.dot(&d));
                    want += (Complex64::new(1.0, 0.0) - e) * (phi * wn * patch.area * w);
                }
            }
        }
        assert!((got.re / want.re - 1.0).abs() < 1e-6, "{} vs {}", got.re, want.re);
        assert!((got.im - want.im).abs() < 1e-6 * want.re);
    }

    #[test]
    fn diagnostics_report_scales() {
        let p = black_sphere(5e-6, 300.0);
        let d = p.diagnostics().unwrap();
        assert!((d.size - 5e-6).abs() < 1e-12);
        assert!(d.absorption_length.is_none());
        assert!(d.to_string().contains("thermal wavelength"));
    }
}
