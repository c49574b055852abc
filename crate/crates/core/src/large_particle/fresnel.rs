use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::material::constants::C;
use crate::numerics::transverse_frame;
use crate::optics::CVector3;

/// Interface coefficients for a plane wave leaving the body along `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelSet {
    pub t_s: Complex64,
    pub t_p: Complex64,
    /// Intensity reflection coefficients.
    pub r_s: f64,
    pub r_p: f64,
    /// Normal wavevector components inside (Im ≥ 0) and outside [1/m].
    pub k_in: Complex64,
    pub k_ex: f64,
}

impl FresnelSet {
    pub fn transmission_s(&self) -> f64 {
        1.0 - self.r_s
    }

    pub fn transmission_p(&self) -> f64 {
        1.0 - self.r_p
    }

    /// T_s + T_p, the emissivity summed over both polarizations.
    pub fn transmission_sum(&self) -> f64 {
        2.0 - self.r_s - self.r_p
    }
}

fn check_inputs(n: &Vector3<f64>, e_perp: &Vector3<f64>, eps: Complex64, omega: f64) -> Result<()> {
    for (name, v) in [("direction", n), ("surface normal", e_perp)] {
        if !((v.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::Argument(format!("{name} must be a unit vector, norm {}", v.norm())));
        }
    }
    if eps.im < 0.0 || !eps.re.is_finite() || !eps.im.is_finite() {
        return Err(Error::Argument(format!("permittivity must be finite with Im >= 0, got {eps}")));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Argument(format!("angular frequency must be positive, got {omega}")));
    }
    Ok(())
}

/// k⊥ = k√(ε − |e⊥×n|²) inside (branch with Im ≥ 0) and k√(1 − |e⊥×n|²) outside.
pub fn wavevector_normal(n: &Vector3<f64>, e_perp: &Vector3<f64>, eps: Complex64, omega: f64) -> Result<(Complex64, f64)> {
    check_inputs(n, e_perp, eps, omega)?;
    let k = omega / C;
    let sin2 = e_perp.cross(n).norm_squared().min(1.0);
    let mut root = (eps - sin2).sqrt();
    if root.im < 0.0 {
        root = -root;
    }
    Ok((root * k, k * (1.0 - sin2).sqrt()))
}

pub fn fresnel(n: &Vector3<f64>, e_perp: &Vector3<f64>, eps: Complex64, omega: f64) -> Result<FresnelSet> {
    let (k_in, k_ex) = wavevector_normal(n, e_perp, eps, omega)?;
    let ds = k_in + k_ex;
    let dp = k_in + eps * k_ex;
    if ds.norm() == 0.0 || dp.norm() == 0.0 {
        return Err(Error::DegenerateDirection(format!(
            "Fresnel denominators vanish for grazing emission with eps = {eps}"
        )));
    }
    Ok(FresnelSet {
        t_s: 2.0 * k_in / ds,
        t_p: 2.0 * eps * k_in / dp / eps.sqrt(),
        r_s: ((k_in - k_ex) / ds).norm_sqr(),
        r_p: ((k_in - eps * k_ex) / dp).norm_sqr(),
        k_in,
        k_ex,
    })
}

/// Interior polarization vectors (e_s, e_p). e_s is a unit vector; e_p carries
/// the 1/√ε normalization, so e_p·e_p* = (k²s² + |k⊥|²)/(k²|ε|).
pub fn interior_polarizations(
    n: &Vector3<f64>,
    e_perp: &Vector3<f64>,
    eps: Complex64,
    k_in: Complex64,
    omega: f64,
) -> (CVector3, CVector3) {
    let k = omega / C;
    let cross = n.cross(e_perp);
    let s = cross.norm();
    let (e_s, tangent) = if s > 1e-12 {
        let tangent = (n - e_perp * e_perp.dot(n)) / s;
        (cross / s, tangent)
    } else {
        let (u, v) = transverse_frame(e_perp);
        (v, u)
    };
    let c = |v: Vector3<f64>| v.map(|x| Complex64::new(x, 0.0));
    let e_p = (c(*e_perp) * Complex64::new(s, 0.0) - c(tangent) * (k_in / k)) / eps.sqrt();
    (c(e_s), e_p)
}

/// Σ_σ |t_σ/k⊥_in|² (e_σ·e_σ*) from the transmission amplitudes and interior
/// polarization vectors [m²].
pub fn jump_factor(n: &Vector3<f64>, e_perp: &Vector3<f64>, eps: Complex64, omega: f64) -> Result<f64> {
    let f = fresnel(n, e_perp, eps, omega)?;
    if f.k_in.re <= 0.0 {
        return Err(Error::DegenerateDirection("interior normal wavevector has no propagating part".into()));
    }
    if f.k_ex <= 0.0 {
        return Err(Error::DegenerateDirection("emission direction is tangent to the surface".into()));
    }
    let (e_s, e_p) = interior_polarizations(n, e_perp, eps, f.k_in, omega);
    let ks = f.k_in.norm_sqr();
    Ok(f.t_s.norm_sqr() / ks * e_s.norm_squared() + f.t_p.norm_sqr() / ks * e_p.norm_squared())
}

/// Closed form of [`jump_factor`]: (2 − R_s − R_p)/(k⊥_ex Re k⊥_in) [m²].
pub fn jump_factor_closed_form(n: &Vector3<f64>, e_perp: &Vector3<f64>, eps: Complex64, omega: f64) -> Result<f64> {
    let f = fresnel(n, e_perp, eps, omega)?;
    if f.k_in.re <= 0.0 || f.k_ex <= 0.0 {
        return Err(Error::DegenerateDirection("closed form needs k_ex > 0 and Re k_in > 0".into()));
    }
    Ok(f.transmission_sum() / (f.k_ex * f.k_in.re))
}
