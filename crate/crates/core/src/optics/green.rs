//! Free-space dyadic Green tensor.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::material::constants::C;

/// Below this kr the imaginary part is evaluated from its Taylor series.
pub const SERIES_SWITCH: f64 = 0.1;

/// Complex 3×3 Green tensor [1/m].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenTensor3 {
    pub value: Matrix3<Complex64>,
}

impl GreenTensor3 {
    pub fn re(&self) -> Matrix3<f64> {
        self.value.map(|z| z.re)
    }

    pub fn im(&self) -> Matrix3<f64> {
        self.value.map(|z| z.im)
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Argument(format!("angular frequency must be positive, got {omega}")));
    }
    Ok(())
}

/// G₀(r; ω) = e^{ikr}/(4πr) [(1 + (ikr − 1)/k²r²) 𝟙 + (3 − 3ikr − k²r²)/k²r² e_r⊗e_r].
pub fn free_green(dr: &Vector3<f64>, omega: f64) -> Result<GreenTensor3> {
    check_omega(omega)?;
    let r = dr.norm();
    if r == 0.0 {
        return Err(Error::Singular("free Green tensor is singular at zero separation; use im_free_green".into()));
    }
    let k = omega / C;
    let x = k * r;
    let i = Complex64::i();
    let x2 = x * x;
    let phase = Complex64::from_polar(1.0 / (4.0 * PI * r), x);
    let a = phase * (1.0 + (i * x - 1.0) / x2);
    let b = phase * ((3.0 - 3.0 * i * x - x2) / x2);
    let e = dr / r;
    let value = Matrix3::from_fn(|p, q| {
        let delta = if p == q { a } else { Complex64::new(0.0, 0.0) };
        delta + b * (e[p] * e[q])
    });
    Ok(GreenTensor3 { value })
}

/// Scalar coefficients (f, g) with Im G₀ = (k/4π)[f 𝟙 + g e_r⊗e_r], as functions of x = kr.
pub fn im_green_coefficients(x: f64) -> (f64, f64) {
    if x < SERIES_SWITCH {
        im_green_series(x)
    } else {
        im_green_direct(x)
    }
}

pub(crate) fn im_green_direct(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let x3 = x * x * x;
    let f = (x * x * s + x * c - s) / x3;
    let g = ((3.0 - x * x) * s - 3.0 * x * c) / x3;
    (f, g)
}

/// Degree-8 Taylor polynomials:
/// f = Σ (−1)ⁿ (2n+2)² x²ⁿ/(2n+3)!, g = −Σ (−1)ⁿ (2n+2)(2n) x²ⁿ/(2n+3)!.
pub(crate) fn im_green_series(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let mut f = 0.0;
    let mut g = 0.0;
    let mut pow = 1.0;
    let mut fact = 6.0; // (2n+3)! at n = 0
    for n in 0..5 {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        f += sign * (2.0 * nf + 2.0).powi(2) * pow / fact;
        g -= sign * (2.0 * nf + 2.0) * (2.0 * nf) * pow / fact;
        pow *= x2;
        fact *= (2.0 * nf + 4.0) * (2.0 * nf + 5.0);
    }
    (f, g)
}

/// Imaginary part of G₀, regular at zero separation where it equals (ω/6πc)𝟙.
pub fn im_free_green(dr: &Vector3<f64>, omega: f64) -> Result<Matrix3<f64>> {
    check_omega(omega)?;
    if !dr.iter().all(|v| v.is_finite()) {
        return Err(Error::Argument("separation must be finite".into()));
    }
    let k = omega / C;
    let r = dr.norm();
    let (f, g) = im_green_coefficients(k * r);
    let pre = k / (4.0 * PI);
    let mut m = Matrix3::identity() * (pre * f);
    if r > 0.0 {
        let e = dr / r;
        m += e * e.transpose() * (pre * g);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_separation_limit() {
        let w = 3.0e14;
        let m = im_free_green(&Vector3::zeros(), w).unwrap();
        let want = w / (6.0 * PI * C);
        assert!((m - Matrix3::identity() * want).abs().max() <= 1e-10 * want);
    }

    #[test]
    fn real_part_is_singular_at_origin() {
        assert!(matches!(free_green(&Vector3::zeros(), 1e14), Err(Error::Singular(_))));
        assert!(free_green(&Vector3::x(), 0.0).is_err());
    }

    #[test]
    fn series_and_direct_agree_near_switch() {
        for x in [0.01, 0.05, 0.1, 0.2] {
            let (fs, gs) = im_green_series(x);
            let (fd, gd) = im_green_direct(x);
            let scale = fs.abs();
            assert!((fs - fd).abs() <= 1e-10 * scale, "x={x}");
            assert!((gs - gd).abs() <= 1e-10 * scale, "x={x}");
        }
    }

    #[test]
    fn kr_one_on_z_axis() {
        // At k = r = 1: G_xx = i e^{i}/4π, G_zz = 2(1 − i) e^{i}/4π, off-diagonals 0.
        let omega = C;
        let g = free_green(&Vector3::z(), omega).unwrap().value;
        let e = Complex64::from_polar(1.0 / (4.0 * PI), 1.0);
        let i = Complex64::i();
        assert!((g[(0, 0)] - i * e).norm() < 1e-15);
        assert!((g[(1, 1)] - i * e).norm() < 1e-15);
        assert!((g[(2, 2)] - (2.0 - 2.0 * i) * e).norm() < 1e-15);
        assert!(g[(0, 1)].norm() == 0.0 && g[(0, 2)].norm() == 0.0);
    }

    #[test]
    fn imaginary_part_matches_full_tensor() {
        let dr = Vector3::new(0.3e-6, -1.1e-6, 0.4e-6);
        for w in [1e13, 1e14, 1e15] {
            let full = free_green(&dr, w).unwrap().im();
            let im = im_free_green(&dr, w).unwrap();
            assert!((full - im).abs().max() <= 1e-12 * im.abs().max());
        }
    }

    #[test]
    fn reciprocity_and_symmetry() {
        let dr = Vector3::new(1.0e-6, 2.0e-7, -3.0e-7);
        let g = free_green(&dr, 2e14).unwrap().value;
        let h = free_green(&(-dr), 2e14).unwrap().value;
        assert!((g - h.transpose()).map(|z| z.norm()).max() <= 1e-13 * g.map(|z| z.norm()).max());
        let m = im_free_green(&dr, 2e14).unwrap();
        assert_eq!(m, m.transpose());
        assert_eq!(m, im_free_green(&(-dr), 2e14).unwrap());
    }

    #[test]
    fn far_field_is_transverse() {
        let n = Vector3::new(1.0, 2.0, 2.0) / 3.0;
        let omega = 1e15;
        let r = 1e3 * C / omega;
        let g = free_green(&(n * r), omega).unwrap().value;
        let nc = n.map(|v| Complex64::new(v, 0.0));
        let ng = nc.transpose() * g;
        let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm(ng.as_slice()) / norm(g.as_slice()) <= 2e-3);
    }

    #[test]
    fn decays_at_large_separation() {
        let omega = 1e15;
        let k = omega / C;
        let m = im_free_green(&(Vector3::x() * 1e6 / k), omega).unwrap() * (6.0 * PI / k);
        assert!(m.abs().max() < 3e-6);
    }
}
