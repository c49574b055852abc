use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;

use super::basis::AngularBasis;
use super::operators::BodyAxisOperators;

/// Expectation values of a rotor state, in units of ħ and ħ².
///
/// Values are raw traces tr(Aρ); after truncation leakage they refer to the
/// population remaining in the basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorObservables {
    pub angular_momentum: Vector3<f64>,
    /// Symmetrized second moments ⟨(JᵢJⱼ + JⱼJᵢ)/2⟩.
    pub second_moments: Matrix3<f64>,
    pub j_squared: f64,
    pub axis: Vector3<f64>,
}

// Cartesian angular momentum as (row, col, value) lists.
fn angular_momentum(basis: &AngularBasis) -> [Vec<(usize, usize, Complex64)>; 3] {
    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut z = Vec::new();
    for l in 0..=basis.l_max() {
        let li = l as i64;
        for m in -li..=li {
            let i = basis.index(l, m).unwrap();
            z.push((i, i, Complex64::new(m as f64, 0.0)));
            if m < li {
                // ⟨ℓ, m+1|L₊|ℓ, m⟩
                let c = ((li * (li + 1) - m * (m + 1)) as f64).sqrt();
                let up = basis.index(l, m + 1).unwrap();
                x.push((up, i, Complex64::new(0.5 * c, 0.0)));
                x.push((i, up, Complex64::new(0.5 * c, 0.0)));
                y.push((up, i, Complex64::new(0.0, -0.5 * c)));
                y.push((i, up, Complex64::new(0.0, 0.5 * c)));
            }
        }
    }
    [x, y, z]
}

fn apply(op: &[(usize, usize, Complex64)], rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
    for &(i, j, v) in op {
        for c in 0..rho.ncols() {
            out[(i, c)] += v * rho[(j, c)];
        }
    }
    out
}

fn trace(op: &[(usize, usize, Complex64)], rho: &DMatrix<Complex64>) -> Complex64 {
    op.iter().map(|&(i, j, v)| v * rho[(j, i)]).sum()
}

/// ⟨J⟩, ⟨J⊗J⟩, ⟨J²⟩ and ⟨m̂⟩ of `rho` on `basis`.
pub fn rotor_observables(basis: &AngularBasis, rho: &DMatrix<Complex64>) -> RotorObservables {
    let j = angular_momentum(basis);
    let mut angular_momentum = Vector3::zeros();
    let mut second_moments = Matrix3::zeros();
    let applied: Vec<_> = j.iter().map(|op| apply(op, rho)).collect();
    for a in 0..3 {
        angular_momentum[a] = trace(&j[a], rho).re;
        for b in 0..3 {
            // tr(J_a J_b ρ) = tr(J_a (J_b ρ))
            second_moments[(a, b)] = trace(&j[a], &applied[b]).re;
        }
    }
    let second_moments = 0.5 * (second_moments + second_moments.transpose());
    let j_squared = (0..basis.dim())
        .map(|i| {
            let l = basis.quantum_numbers(i).0 as f64;
            l * (l + 1.0) * rho[(i, i)].re
        })
        .sum();
    let axis = if basis.l_max() == 0 {
        Vector3::zeros()
    } else {
        let ops = BodyAxisOperators::new(basis.l_max()).expect("l_max >= 1");
        let p = ops.spherical(1).expectation(rho);
        let m = ops.spherical(-1).expectation(rho);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Vector3::new(((m - p) * s).re, ((p + m) * Complex64::new(0.0, s)).re, ops.spherical(0).expectation(rho).re)
    };
    RotorObservables { angular_momentum, second_moments, j_squared, axis }
}
