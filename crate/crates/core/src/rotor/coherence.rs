use nalgebra::{DVector, Vector3};
use num_complex::Complex64;

use super::basis::{spherical_harmonics, AngularBasis, AngularDensityMatrix};
use super::propagate::Trajectory;
use crate::error::{Error, Result};

/// Default ceiling on the rms residual of ln V in [`coherence_decay_rate`].
pub const DEFAULT_FIT_THRESHOLD: f64 = 1e-2;

fn unit(v: &Vector3<f64>, name: &str) -> Result<Vector3<f64>> {
    if !((v.norm() - 1.0).abs() <= 1e-12) {
        return Err(Error::Argument(format!("{name} must be a unit vector, |{name}| = {}", v.norm())));
    }
    Ok(*v)
}

/// State localized about `axis` with amplitudes c_ℓm ∝ Y_ℓ^m(axis)* e^{−ℓ(ℓ+1)/2κ}.
pub fn orientation_wavepacket(basis: &AngularBasis, axis: &Vector3<f64>, kappa: f64) -> Result<DVector<Complex64>> {
    let axis = unit(axis, "axis")?;
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::Argument(format!("concentration must be positive, got {kappa}")));
    }
    let y = spherical_harmonics(basis, &axis);
    let c = DVector::from_fn(basis.dim(), |i, _| {
        let l = basis.quantum_numbers(i).0 as f64;
        y[i].conj() * (-l * (l + 1.0) / (2.0 * kappa)).exp()
    });
    let n = c.norm();
    Ok(c / Complex64::new(n, 0.0))
}

/// Normalized superposition of the wavepackets about `m` and `m_prime`.
pub fn wavepacket_superposition(
    basis: &AngularBasis,
    m: &Vector3<f64>,
    m_prime: &Vector3<f64>,
    kappa: f64,
) -> Result<AngularDensityMatrix> {
    let psi = orientation_wavepacket(basis, m, kappa)? + orientation_wavepacket(basis, m_prime, kappa)?;
    AngularDensityMatrix::pure(*basis, &psi)
}

/// Visibility |ρ(m, m′)| / √(ρ(m, m) ρ(m′, m′)) of the orientation kernel.
pub fn coherence_visibility(rho: &AngularDensityMatrix, m: &Vector3<f64>, m_prime: &Vector3<f64>) -> Result<f64> {
    let probe = Probe::new(&rho.basis(), m, m_prime)?;
    Ok(probe.visibility(rho.matrix()))
}

struct Probe {
    a: DVector<Complex64>,
    b: DVector<Complex64>,
}

impl Probe {
    fn new(basis: &AngularBasis, m: &Vector3<f64>, m_prime: &Vector3<f64>) -> Result<Self> {
        let m = unit(m, "m")?;
        let mp = unit(m_prime, "m_prime")?;
        Ok(Probe { a: spherical_harmonics(basis, &m), b: spherical_harmonics(basis, &mp) })
    }

    fn kernel(rho: &nalgebra::DMatrix<Complex64>, x: &DVector<Complex64>, y: &DVector<Complex64>) -> Complex64 {
        (x.transpose() * rho * y.map(|z| z.conj()))[(0, 0)]
    }

    fn visibility(&self, rho: &nalgebra::DMatrix<Complex64>) -> f64 {
        let cross = Self::kernel(rho, &self.a, &self.b).norm();
        let aa = Self::kernel(rho, &self.a, &self.a).re;
        let bb = Self::kernel(rho, &self.b, &self.b).re;
        cross / (aa * bb).sqrt()
    }
}

/// Least-squares fit ln V(t) = c − rate·t.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceFit {
    /// Decay rate [1/s].
    pub rate: f64,
    pub intercept: f64,
    /// Root-mean-square residual of ln V.
    pub residual_rms: f64,
    pub visibilities: Vec<f64>,
}

/// Coherence decay rate between orientations `m` and `m_prime` with the
/// default residual threshold.
pub fn coherence_decay_rate(trajectory: &Trajectory, m: &Vector3<f64>, m_prime: &Vector3<f64>) -> Result<CoherenceFit> {
    fit_coherence_decay(trajectory, m, m_prime, DEFAULT_FIT_THRESHOLD)
}

pub fn fit_coherence_decay(
    trajectory: &Trajectory,
    m: &Vector3<f64>,
    m_prime: &Vector3<f64>,
    threshold: f64,
) -> Result<CoherenceFit> {
    if trajectory.len() < 3 {
        return Err(Error::Argument(format!("need at least 3 recorded states, got {}", trajectory.len())));
    }
    let probe = Probe::new(&trajectory.basis(), m, m_prime)?;
    let visibilities: Vec<f64> = (0..trajectory.len()).map(|i| probe.visibility(trajectory.matrix(i))).collect();
    if let Some(v) = visibilities.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Singular(format!("coherence visibility {v} cannot be fitted on a log scale")));
    }
    let t = trajectory.times();
    let y: Vec<f64> = visibilities.iter().map(|v| v.ln()).collect();
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let stt: f64 = t.iter().map(|ti| (ti - tm).powi(2)).sum();
    let sty: f64 = t.iter().zip(&y).map(|(ti, yi)| (ti - tm) * (yi - ym)).sum();
    let slope = sty / stt;
    let intercept = ym - slope * tm;
    let residual_rms = (t.iter().zip(&y).map(|(ti, yi)| (yi - intercept - slope * ti).powi(2)).sum::<f64>() / n).sqrt();
    if !(residual_rms <= threshold) {
        return Err(Error::FitQuality { residual: residual_rms, threshold });
    }
    Ok(CoherenceFit { rate: -slope, intercept, residual_rms, visibilities })
}
