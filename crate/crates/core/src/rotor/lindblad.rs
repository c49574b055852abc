use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::AngularBasis;
use super::operators::BodyAxisOperators;
use crate::error::{Error, Result};

/// Emission generator of a linear rotor at fixed center of mass,
/// Dρ = Γ(Σ_j m̂_j ρ m̂_j − ρ), optionally with free rotation −iB[L̂², ρ].
///
/// With the truncated operators the top shell ℓ = ℓmax loses population to
/// the discarded shell; the interior block is trace preserving.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    ops: BodyAxisOperators,
    rate: f64,
    rotation_constant: f64,
    l_squared: Vec<f64>,
}

impl LindbladGenerator {
    /// `rate` is the orientational localization rate Γ [1/s].
    pub fn new(l_max: usize, rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::Argument(format!("localization rate must be nonnegative, got {rate}")));
        }
        let ops = BodyAxisOperators::new(l_max)?;
        let basis = ops.basis();
        let l_squared = (0..basis.dim())
            .map(|i| {
                let l = basis.quantum_numbers(i).0 as f64;
                l * (l + 1.0)
            })
            .collect();
        Ok(LindbladGenerator { ops, rate, rotation_constant: 0.0, l_squared })
    }

    /// Adds the free rotor Hamiltonian ħB L̂², with B = ħ/2I in rad/s.
    pub fn with_rotation_constant(mut self, b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::Argument(format!("rotation constant must be finite, got {b}")));
        }
        self.rotation_constant = b;
        Ok(self)
    }

    pub fn basis(&self) -> AngularBasis {
        self.ops.basis()
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn rotation_constant(&self) -> f64 {
        self.rotation_constant
    }

    pub fn operators(&self) -> &BodyAxisOperators {
        &self.ops
    }

    /// Largest frequency scale of the generator, used to bound the step.
    pub fn stiffness(&self) -> f64 {
        let l = self.basis().l_max() as f64;
        self.rate.max(self.rotation_constant.abs() * l * (l + 1.0))
    }

    pub fn apply(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = if self.rate > 0.0 {
            (self.ops.sandwich(rho) - rho) * Complex64::new(self.rate, 0.0)
        } else {
            DMatrix::zeros(rho.nrows(), rho.ncols())
        };
        if self.rotation_constant != 0.0 {
            for j in 0..rho.ncols() {
                let lj = self.l_squared[j];
                for i in 0..rho.nrows() {
                    let e = self.l_squared[i] - lj;
                    if e != 0.0 {
                        out[(i, j)] += Complex64::new(0.0, -self.rotation_constant * e) * rho[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Rate at which population leaves the truncated space, Γ Σ_m c_m ρ_mm
    /// over the top shell with the dropped weights c_m.
    pub fn leakage_rate(&self, rho: &DMatrix<Complex64>) -> f64 {
        let basis = self.basis();
        let l = basis.l_max();
        let sum: f64 = (-(l as i64)..=(l as i64))
            .map(|m| self.ops.truncation_loss(m) * rho[(basis.index(l, m).unwrap(), basis.index(l, m).unwrap())].re)
            .sum();
        self.rate * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Orientation;
    use crate::numerics::sphere_quadrature;
    use crate::rotor::basis::AngularDensityMatrix;
    use nalgebra::Vector3;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn sample_state(dim: usize, seed: f64) -> DMatrix<Complex64> {
        let a = DMatrix::from_fn(dim, dim, |i, j| Complex64::new((seed + 0.7 * i as f64 - 0.3 * j as f64).sin(), (seed * j as f64 + 0.2 * i as f64).cos()));
        let rho = &a * a.adjoint();
        let tr = rho.trace();
        rho / tr
    }

    #[test]
    fn rejects_negative_rate() {
        assert!(LindbladGenerator::new(3, -1.0).is_err());
        assert!(LindbladGenerator::new(0, 1.0).is_err());
    }

    #[test]
    fn ground_state_feeds_only_the_first_shell() {
        let g = LindbladGenerator::new(4, 2.0).unwrap();
        let rho = AngularDensityMatrix::basis_state(g.basis(), 0, 0).unwrap();
        let d = g.apply(rho.matrix());
        for i in 0..g.basis().dim() {
            for j in 0..g.basis().dim() {
                let (li, _) = g.basis().quantum_numbers(i);
                let (lj, _) = g.basis().quantum_numbers(j);
                if !((li == 1 && lj == 1) || (i == 0 && j == 0)) {
                    assert_eq!(d[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
        assert!((d[(0, 0)].re + 2.0).abs() < 1e-15);
        for i in 1..4 {
            assert!((d[(i, i)].re - 2.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn couplings_change_l_by_at_most_one() {
        // Apply to each matrix unit |i⟩⟨j| and inspect where weight lands.
        let g = LindbladGenerator::new(3, 1.0).unwrap();
        let b = g.basis();
        let n = b.dim();
        for i in 0..n {
            for j in 0..n {
                let mut e = DMatrix::zeros(n, n);
                e[(i, j)] = Complex64::new(1.0, 0.0);
                let d = g.apply(&e);
                let (li, mi) = b.quantum_numbers(i);
                let (lj, mj) = b.quantum_numbers(j);
                for a in 0..n {
                    for c in 0..n {
                        if d[(a, c)].norm() == 0.0 {
                            continue;
                        }
                        let (la, ma) = b.quantum_numbers(a);
                        let (lc, mc) = b.quantum_numbers(c);
                        let same = a == i && c == j;
                        assert!(same || ((la as i64 - li as i64).abs() == 1 && (lc as i64 - lj as i64).abs() == 1));
                        assert!((ma - mi).abs() <= 1 && (mc - mj).abs() <= 1 && ma - mi == mc - mj);
                    }
                }
            }
        }
    }

    #[test]
    fn mixed_interior_state_is_stationary() {
        let g = LindbladGenerator::new(6, 1.0).unwrap();
        let rho = AngularDensityMatrix::mixed_up_to(g.basis(), 4).unwrap();
        let d = g.apply(rho.matrix());
        // Only the boundary between shells 4 and 5 carries net flow.
        let n4 = 25;
        let block = d.view((0, 0), (16, 16)).into_owned();
        assert!(max_abs(&block) < 1e-15);
        assert!(d.view((16, 16), (9, 9)).iter().all(|z| z.re <= 1e-15));
        assert!(d.view((n4, n4), (11, 11)).iter().all(|z| z.re >= -1e-15));
        assert!(d.trace().norm() < 1e-14);
    }

    #[test]
    fn trace_loss_equals_leakage_rate() {
        let g = LindbladGenerator::new(5, 1.7).unwrap();
        let rho = sample_state(g.basis().dim(), 0.4);
        let d = g.apply(&rho);
        assert!((-d.trace().re - g.leakage_rate(&rho)).abs() < 1e-14);
        assert!(d.trace().im.abs() < 1e-14);
    }

    #[test]
    fn solid_angle_integral_collapses() {
        // (3/8π)∫dΩ m̂·(𝟙 − n⊗n) ρ m̂ reduces to Σ_j m̂_j ρ m̂_j.
        let g = LindbladGenerator::new(4, 1.0).unwrap();
        let n = g.basis().dim();
        let rho = sample_state(n, 1.1);
        let m = g.operators().cartesian();
        let q = sphere_quadrature(6).unwrap();
        let mut proj = nalgebra::Matrix3::zeros();
        for (dir, w) in q.iter() {
            proj += (nalgebra::Matrix3::identity() - dir * dir.transpose()) * w;
        }
        proj *= 3.0 / (8.0 * PI);
        let mut jump = DMatrix::zeros(n, n);
        for i in 0..3 {
            for j in 0..3 {
                jump += &m[i] * &rho * &m[j] * Complex64::new(proj[(i, j)], 0.0);
            }
        }
        let d = g.apply(&rho) + &rho;
        assert!(max_abs(&(jump - d)) < 1e-10);
    }

    #[test]
    fn rotation_term_is_a_commutator() {
        let g = LindbladGenerator::new(3, 0.0).unwrap().with_rotation_constant(0.5).unwrap();
        let rho = sample_state(16, 2.0);
        let l2 = DMatrix::from_fn(16, 16, |i, j| {
            let l = g.basis().quantum_numbers(i).0 as f64;
            if i == j { Complex64::new(l * (l + 1.0), 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        let want = (&l2 * &rho - &rho * &l2) * Complex64::new(0.0, -0.5);
        assert!(max_abs(&(g.apply(&rho) - want)) < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn commutes_with_rotations(t in 0.0..3.1f64, p in -3.1..3.1f64, a in -3.0..3.0f64, seed in 0.0..5.0f64) {
            let g = LindbladGenerator::new(4, 1.3).unwrap().with_rotation_constant(0.2).unwrap();
            let axis = Vector3::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos());
            let r = Orientation::from_axis_angle(&axis, a).unwrap();
            let rho = AngularDensityMatrix::unchecked(g.basis(), sample_state(25, seed)).unwrap();
            let lhs = g.apply(rho.rotated(&r).matrix());
            let rhs = AngularDensityMatrix::unchecked(g.basis(), g.apply(rho.matrix())).unwrap().rotated(&r);
            prop_assert!(max_abs(&(lhs - rhs.matrix())) < 1e-9);
        }

        #[test]
        fn preserves_hermiticity(seed in 0.0..5.0f64) {
            let g = LindbladGenerator::new(4, 0.9).unwrap().with_rotation_constant(-0.3).unwrap();
            let d = g.apply(&sample_state(25, seed));
            prop_assert!(max_abs(&(&d - d.adjoint())) < 1e-14);
        }
    }
}
