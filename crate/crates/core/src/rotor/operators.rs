use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::AngularBasis;
use crate::error::{Error, Result};

/// Raising coefficient ⟨ℓ+1, m+q|m̂_q|ℓ, m⟩ for q ∈ {−1, 0, 1}.
pub(crate) fn raising_coefficient(l: usize, m: i64, q: i64) -> f64 {
    let lf = l as f64;
    let mf = m as f64;
    let den = (2.0 * lf + 1.0) * (2.0 * lf + 3.0);
    match q {
        0 => (((lf + 1.0).powi(2) - mf * mf) / den).sqrt(),
        1 => ((lf + mf + 1.0) * (lf + mf + 2.0) / (2.0 * den)).sqrt(),
        -1 => ((lf - mf + 1.0) * (lf - mf + 2.0) / (2.0 * den)).sqrt(),
        _ => 0.0,
    }
}

/// Real matrix stored as (row, column, value) triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            out[(i, j)] += Complex64::new(v, 0.0);
        }
        out
    }

    /// A ρ.
    pub fn mul_left(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = rho.nrows();
        let mut out = DMatrix::zeros(self.dim, rho.ncols());
        let dst = out.as_mut_slice();
        for (c, src) in rho.as_slice().chunks_exact(n).enumerate() {
            let col = &mut dst[c * self.dim..(c + 1) * self.dim];
            for &(i, j, v) in &self.entries {
                col[i] += src[j] * v;
            }
        }
        out
    }

    /// ρ Aᵀ.
    pub fn mul_right_transpose(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = rho.nrows();
        let mut out = DMatrix::zeros(n, self.dim);
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        for &(i, j, v) in &self.entries {
            let from = &src[j * n..(j + 1) * n];
            for (d, s) in dst[i * n..(i + 1) * n].iter_mut().zip(from) {
                *d += s * v;
            }
        }
        out
    }

    /// tr(A ρ).
    pub fn expectation(&self, rho: &DMatrix<Complex64>) -> Complex64 {
        self.entries.iter().map(|&(i, j, v)| rho[(j, i)] * v).sum()
    }
}

/// Symmetry-axis operator m̂ in spherical components, truncated at ℓmax.
///
/// m̂₊ = −(m̂_x + i m̂_y)/√2, m̂₋ = (m̂_x − i m̂_y)/√2 and m̂₀ = m̂_z. They act as
/// multiplication by √(4π/3) Y₁^q in the orientation representation.
#[derive(Debug, Clone)]
pub struct BodyAxisOperators {
    basis: AngularBasis,
    plus: SparseOperator,
    minus: SparseOperator,
    zero: SparseOperator,
}

impl BodyAxisOperators {
    pub fn new(l_max: usize) -> Result<Self> {
        if l_max == 0 {
            return Err(Error::Argument("body-axis operators need l_max >= 1".into()));
        }
        let basis = AngularBasis::new(l_max);
        let build = |q: i64| {
            let mut entries = Vec::new();
            for l in 0..l_max {
                for m in -(l as i64)..=(l as i64) {
                    let from = basis.index(l, m).unwrap();
                    // |ℓ,m⟩ → |ℓ+1, m+q⟩
                    let up = raising_coefficient(l, m, q);
                    entries.push((basis.index(l + 1, m + q).unwrap(), from, up));
                    // |ℓ+1, m−q⟩ → |ℓ, m⟩, the adjoint of the raising part of m̂_{−q}
                    let down = raising_coefficient(l, m, -q);
                    let sign = if q == 0 { 1.0 } else { -1.0 };
                    entries.push((from, basis.index(l + 1, m - q).unwrap(), sign * down));
                }
            }
            SparseOperator { dim: basis.dim(), entries }
        };
        Ok(BodyAxisOperators { basis, plus: build(1), minus: build(-1), zero: build(0) })
    }

    pub fn basis(&self) -> AngularBasis {
        self.basis
    }

    /// Spherical component q ∈ {−1, 0, 1}.
    pub fn spherical(&self, q: i64) -> &SparseOperator {
        match q {
            1 => &self.plus,
            -1 => &self.minus,
            0 => &self.zero,
            _ => panic!("spherical component must be -1, 0 or 1, got {q}"),
        }
    }

    /// Dense Cartesian components (m̂_x, m̂_y, m̂_z).
    pub fn cartesian(&self) -> [DMatrix<Complex64>; 3] {
        let p = self.plus.to_dense();
        let m = self.minus.to_dense();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [
            (&m - &p) * Complex64::new(s, 0.0),
            (&p + &m) * Complex64::new(0.0, s),
            self.zero.to_dense(),
        ]
    }

    /// Σ_q m̂_q ρ m̂_q†, equal to Σ_j m̂_j ρ m̂_j.
    pub fn sandwich(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
        for op in [&self.plus, &self.minus, &self.zero] {
            // Real entries, so m̂_q† = m̂_qᵀ.
            out += op.mul_right_transpose(&op.mul_left(rho));
        }
        out
    }

    /// Weight of the top shell state |ℓmax, m⟩ that the truncation removes,
    /// 1 − ⟨Σ_q m̂_q†m̂_q⟩.
    pub fn truncation_loss(&self, m: i64) -> f64 {
        let l = self.basis.l_max();
        [-1, 0, 1].iter().map(|&q| raising_coefficient(l, m, q).powi(2)).sum()
    }
}
