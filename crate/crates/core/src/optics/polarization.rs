//! Transverse polarization bases.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CVector3 = Vector3<Complex64>;

/// How the transverse pair is chosen for a given direction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PolarizationGauge {
    /// Real pair; e₁ is the projection of the coordinate axis along the
    /// smallest component of n.
    #[default]
    SmallestComponent,
    /// Real pair; e₁ is the projection of the coordinate axis along the
    /// largest component of n that is not parallel to n, rotated by `angle`
    /// about n.
    Rotated { angle: f64 },
    /// Helicity pair (e₁ ± i e₂)/√2 built from the default real pair.
    Circular,
}

/// Direction n with two complex polarization vectors, orthonormal under a*·b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationBasis {
    pub n: Vector3<f64>,
    pub e: [CVector3; 2],
}

fn real_pair(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let i = n.iamin();
    let mut axis = Vector3::zeros();
    axis[i] = 1.0;
    let e1 = (axis - n * n.dot(&axis)).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

fn complexify(v: &Vector3<f64>) -> CVector3 {
    v.map(|x| Complex64::new(x, 0.0))
}

fn check_unit(n: &Vector3<f64>) -> Result<()> {
    if !((n.norm() - 1.0).abs() <= 1e-12) {
        return Err(Error::Argument(format!("direction must be a unit vector, |n| = {}", n.norm())));
    }
    Ok(())
}

/// Default basis for direction `n` (smallest-component pivot).
pub fn polarization_basis(n: &Vector3<f64>) -> Result<PolarizationBasis> {
    polarization_basis_with(n, PolarizationGauge::SmallestComponent)
}

pub fn polarization_basis_with(n: &Vector3<f64>, gauge: PolarizationGauge) -> Result<PolarizationBasis> {
    check_unit(n)?;
    let e = match gauge {
        PolarizationGauge::SmallestComponent => {
            let (e1, e2) = real_pair(n);
            [complexify(&e1), complexify(&e2)]
        }
        PolarizationGauge::Rotated { angle } => {
            let i = n.iamax();
            let j = (i + 1) % 3;
            let mut axis = Vector3::zeros();
            axis[j] = 1.0;
            let mut p = axis - n * n.dot(&axis);
            if p.norm() < 1e-3 {
                axis = Vector3::zeros();
                axis[(i + 2) % 3] = 1.0;
                p = axis - n * n.dot(&axis);
            }
            let a = p.normalize();
            let b = n.cross(&a);
            let (s, c) = angle.sin_cos();
            [complexify(&(a * c + b * s)), complexify(&(b * c - a * s))]
        }
        PolarizationGauge::Circular => {
            let (e1, e2) = real_pair(n);
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let i = Complex64::i();
            let plus = (complexify(&e1) + complexify(&e2) * i) * Complex64::new(h, 0.0);
            let minus = (complexify(&e1) - complexify(&e2) * i) * Complex64::new(h, 0.0);
            [plus, minus]
        }
    };
    Ok(PolarizationBasis { n: *n, e })
}

impl PolarizationBasis {
    /// Σ_σ e_σ ⊗ e_σ*.
    pub fn completeness(&self) -> Matrix3<Complex64> {
        self.e[0] * self.e[0].adjoint() + self.e[1] * self.e[1].adjoint()
    }
}
