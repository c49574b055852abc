use std::f64::consts::PI;

use num_complex::Complex64;

use super::ComplexRate;
use crate::error::Result;
use crate::geometry::{Displacement, Orientation};
use crate::material::bose_occupation;
use crate::material::constants::C;
use crate::numerics::{oriented_sphere_quadrature, FrequencyGrid};
use crate::optics::{polarization_basis, EmissionAmplitudeProvider};

const GAUSS_POINTS: usize = 5;

/// Localization rate from emission amplitudes by direct quadrature,
///
/// F = ∫dω (2ω³/πc³) n̄ Σ_s w_s Im ε Σ_σ ∫d²n { ½|e^{−ik n·(ΔX+Rs)} K_R − e^{−ik n·R′s} K_R′|²
///                                          + i Im[e^{−ik n·(ΔX+Rs)} K_R · (e^{−ik n·R′s} K_R′)*] }.
///
/// Frequencies use a fixed Gauss–Legendre rule on `grid`, with panels split
/// so that each spans at most half a radian of k·(|ΔX| + 2 max|s|).
pub fn localization_rate_via_k(
    provider: &dyn EmissionAmplitudeProvider,
    grid: &FrequencyGrid,
    temperature: f64,
    r: &Orientation,
    r_prime: &Orientation,
    dx: &Displacement,
) -> Result<ComplexRate> {
    let sources = provider.source_points();
    let reach = dx.norm() + 2.0 * sources.iter().map(|(s, _)| s.norm()).fold(0.0, f64::max);
    let axis = if dx.norm() > 0.0 { *dx } else { nalgebra::Vector3::z() };

    let mut nodes = Vec::new();
    for p in grid.nodes().windows(2) {
        let span = (p[1] - p[0]) / C * reach;
        let pieces = (span / 0.5).ceil().max(1.0) as usize;
        for j in 0..pieces {
            nodes.push(p[0] + (p[1] - p[0]) * j as f64 / pieces as f64);
        }
    }
    nodes.push(grid.support().1);
    let fine = FrequencyGrid::new(nodes, grid.policy())?;

    let mut total = Complex64::new(0.0, 0.0);
    for (omega, weight) in fine.gauss_rule(GAUSS_POINTS) {
        let k = omega / C;
        let kr = k * reach;
        let order = kr.ceil() as usize + 16;
        let azimuth = if sources.iter().all(|(s, _)| s.norm() == 0.0) { 8 } else { 2 * order };
        let sphere = oriented_sphere_quadrature(order, azimuth, &axis)?;
        let im_eps = provider.im_permittivity(omega)?;
        if im_eps == 0.0 {
            continue;
        }
        let pre = 2.0 * omega.powi(3) / (PI * C.powi(3)) * bose_occupation(omega, temperature)? * im_eps;
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, wn) in sphere.iter() {
            let basis = polarization_basis(n)?;
            for (s, ws) in &sources {
                let phase = Complex64::from_polar(1.0, -k * n.dot(&(dx + r.rotate(s))));
                let phase_p = Complex64::from_polar(1.0, -k * n.dot(&r_prime.rotate(s)));
                for sigma in 0..2 {
                    let a = provider.amplitude(sigma, &basis, s, omega, r)? * phase;
                    let b = provider.amplitude(sigma, &basis, s, omega, r_prime)? * phase_p;
                    let diff = 0.5 * (a - b).norm_squared();
                    let cross: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum();
                    acc += Complex64::new(diff, cross.im) * (wn * ws);
                }
            }
        }
        total += acc * (pre * weight);
    }
    Ok(ComplexRate::new(total.re, total.im))
}
