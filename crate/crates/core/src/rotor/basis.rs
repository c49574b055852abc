use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Vector3};
use num_complex::Complex64;

use super::wigner::wigner_small_d;
use crate::error::{Error, Result};
use crate::geometry::Orientation;

/// States |ℓ, m⟩ with 0 ≤ ℓ ≤ ℓmax, stored at flat index ℓ² + ℓ + m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngularBasis {
    l_max: usize,
}

impl AngularBasis {
    pub fn new(l_max: usize) -> Self {
        AngularBasis { l_max }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// (ℓmax + 1)².
    pub fn dim(&self) -> usize {
        (self.l_max + 1) * (self.l_max + 1)
    }

    pub fn index(&self, l: usize, m: i64) -> Option<usize> {
        (l <= self.l_max && m.unsigned_abs() as usize <= l).then(|| (l * l + l) as i64 + m).map(|i| i as usize)
    }

    pub fn quantum_numbers(&self, index: usize) -> (usize, i64) {
        let l = (index as f64).sqrt() as usize;
        let l = if (l + 1) * (l + 1) <= index { l + 1 } else { l };
        (l, index as i64 - (l * l + l) as i64)
    }

    /// Indices of the top shell ℓ = ℓmax.
    pub fn top_shell(&self) -> std::ops::Range<usize> {
        self.l_max * self.l_max..self.dim()
    }
}

/// Y_ℓ^m(n) with the Condon–Shortley phase, for all ℓ ≤ ℓmax, in basis order.
#[allow(clippy::needless_range_loop)]
pub fn spherical_harmonics(basis: &AngularBasis, n: &Vector3<f64>) -> DVector<Complex64> {
    let n = n.normalize();
    let x = n.z.clamp(-1.0, 1.0);
    let s = (1.0 - x * x).max(0.0).sqrt();
    let phi = n.y.atan2(n.x);
    let lm = basis.l_max();
    // Normalized associated Legendre functions P̄_ℓ^m(x) for m ≥ 0, such that
    // Y_ℓ^m = P̄_ℓ^m e^{imφ}.
    let mut p = vec![vec![0.0; lm + 1]; lm + 1];
    p[0][0] = (1.0 / (4.0 * PI)).sqrt();
    for m in 1..=lm {
        p[m][m] = -((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s * p[m - 1][m - 1];
    }
    for m in 0..lm {
        p[m + 1][m] = ((2 * m + 3) as f64).sqrt() * x * p[m][m];
    }
    for m in 0..=lm {
        for l in m + 2..=lm {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            p[l][m] = a * (x * p[l - 1][m] - b * p[l - 2][m]);
        }
    }
    let mut y = DVector::zeros(basis.dim());
    for l in 0..=lm {
        for m in 0..=l {
            let v = Complex64::from_polar(p[l][m], m as f64 * phi);
            y[basis.index(l, m as i64).unwrap()] = v;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                y[basis.index(l, -(m as i64)).unwrap()] = v.conj() * sign;
            }
        }
    }
    y
}

/// ZYZ Euler angles (α, β, γ) with R = R_z(α) R_y(β) R_z(γ).
pub fn euler_zyz(r: &Orientation) -> (f64, f64, f64) {
    let m = r.matrix();
    let beta = m[(2, 2)].clamp(-1.0, 1.0).acos();
    if beta.sin().abs() < 1e-12 {
        let alpha = if m[(2, 2)] > 0.0 { m[(1, 0)].atan2(m[(0, 0)]) } else { -m[(1, 0)].atan2(-m[(0, 0)]) };
        (alpha, beta, 0.0)
    } else {
        (m[(1, 2)].atan2(m[(0, 2)]), beta, m[(2, 1)].atan2(-m[(2, 0)]))
    }
}

/// Unitary U(R) on the basis, block diagonal with D^ℓ_{mm′}(R), so that
/// (U ψ)(n) = ψ(Rᵀ n).
pub fn rotation_operator(basis: &AngularBasis, r: &Orientation) -> DMatrix<Complex64> {
    let (alpha, beta, gamma) = euler_zyz(r);
    let dim = basis.dim();
    let mut u = DMatrix::zeros(dim, dim);
    for l in 0..=basis.l_max() {
        let li = l as i64;
        for m in -li..=li {
            for mp in -li..=li {
                let d = wigner_small_d(li, m, mp, beta);
                let phase = Complex64::from_polar(1.0, -(m as f64) * alpha - (mp as f64) * gamma);
                u[(basis.index(l, m).unwrap(), basis.index(l, mp).unwrap())] = phase * d;
            }
        }
    }
    u
}

/// Density matrix over an [`AngularBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct AngularDensityMatrix {
    basis: AngularBasis,
    rho: DMatrix<Complex64>,
}

impl AngularDensityMatrix {
    /// Validate Hermiticity (1e-12), unit trace (1e-10) and positivity (−1e-10).
    pub fn new(basis: AngularBasis, rho: DMatrix<Complex64>) -> Result<Self> {
        let state = AngularDensityMatrix::unchecked(basis, rho)?;
        state.validate(1e-10)?;
        Ok(state)
    }

    /// Shape check only; used for propagated and sub-normalized states.
    pub fn unchecked(basis: AngularBasis, rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != basis.dim() || rho.ncols() != basis.dim() {
            return Err(Error::Argument(format!(
                "density matrix is {}x{}, basis dimension is {}",
                rho.nrows(),
                rho.ncols(),
                basis.dim()
            )));
        }
        Ok(AngularDensityMatrix { basis, rho })
    }

    pub fn pure(basis: AngularBasis, psi: &DVector<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) || psi.len() != basis.dim() {
            return Err(Error::Argument("state vector must be nonzero with the basis dimension".into()));
        }
        let psi = psi / Complex64::new(norm, 0.0);
        Ok(AngularDensityMatrix { basis, rho: &psi * psi.adjoint() })
    }

    pub fn basis_state(basis: AngularBasis, l: usize, m: i64) -> Result<Self> {
        let i = basis
            .index(l, m)
            .ok_or_else(|| Error::Argument(format!("|{l}, {m}> is not in the basis")))?;
        let mut psi = DVector::zeros(basis.dim());
        psi[i] = Complex64::new(1.0, 0.0);
        AngularDensityMatrix::pure(basis, &psi)
    }

    /// Uniform mixture over all states with ℓ ≤ `l`.
    pub fn mixed_up_to(basis: AngularBasis, l: usize) -> Result<Self> {
        if l > basis.l_max() {
            return Err(Error::Argument(format!("shell {l} exceeds l_max {}", basis.l_max())));
        }
        let n = (l + 1) * (l + 1);
        let mut rho = DMatrix::zeros(basis.dim(), basis.dim());
        for i in 0..n {
            rho[(i, i)] = Complex64::new(1.0 / n as f64, 0.0);
        }
        Ok(AngularDensityMatrix { basis, rho })
    }

    pub fn basis(&self) -> AngularBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().min()
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > 1e-12 {
            return Err(Error::Validation(format!("density matrix is not Hermitian (defect {herm:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::Validation(format!("density matrix has trace {tr}")));
        }
        let low = self.min_eigenvalue();
        if low < -tol {
            return Err(Error::Validation(format!("density matrix has negative eigenvalue {low:e}")));
        }
        Ok(())
    }

    /// Population of the shell ℓ.
    pub fn shell_population(&self, l: usize) -> f64 {
        let lo = l * l;
        let hi = (l + 1) * (l + 1);
        (lo..hi).map(|i| self.rho[(i, i)].re).sum()
    }

    /// Orientation-representation kernel ρ(n, n′) = Σ Y_i(n) ρ_ij Y_j(n′)*.
    pub fn kernel(&self, n: &Vector3<f64>, n_prime: &Vector3<f64>) -> Complex64 {
        let a = spherical_harmonics(&self.basis, n);
        let b = spherical_harmonics(&self.basis, n_prime);
        (a.transpose() * &self.rho * b.map(|z| z.conj()))[(0, 0)]
    }

    /// U ρ U† for the rotation operator of `r`.
    pub fn rotated(&self, r: &Orientation) -> Self {
        let u = rotation_operator(&self.basis, r);
        AngularDensityMatrix { basis: self.basis, rho: &u * &self.rho * u.adjoint() }
    }
}
