use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use proptest::prelude::*;
use thermal_decoherence::geometry::{DepolarizationMode, EllipsoidShape, Orientation};
use thermal_decoherence::material::constants::{AMU, C, EPS0, HBAR};
use thermal_decoherence::material::{bose_occupation, PermittivityTable};
use thermal_decoherence::small_particle::{OrientationMoments, SmallParticle};

fn silica_sphere() -> &'static SmallParticle {
    static P: OnceLock<SmallParticle> = OnceLock::new();
    P.get_or_init(|| {
        let mass = 1e9 * AMU;
        let radius = (3.0 * mass / (4.0 * PI * 2200.0)).cbrt();
        let shape = EllipsoidShape::sphere(radius, mass).unwrap();
        SmallParticle::new(shape, PermittivityTable::builtin_silica(), 1000.0, DepolarizationMode::Exact).unwrap()
    })
}

fn silica_ellipsoid() -> &'static SmallParticle {
    static P: OnceLock<SmallParticle> = OnceLock::new();
    P.get_or_init(|| {
        let shape = EllipsoidShape::with_density(30e-9, 50e-9, 90e-9, 2200.0).unwrap();
        SmallParticle::new(shape, PermittivityTable::builtin_silica(), 1000.0, DepolarizationMode::Exact).unwrap()
    })
}

/// Coarse Lorentz-oscillator table, cheap enough for randomized amplitude quadrature.
fn coarse_particle() -> &'static SmallParticle {
    static P: OnceLock<SmallParticle> = OnceLock::new();
    P.get_or_init(|| {
        let samples = (0..24).map(|i| {
            let w = 3e13 * (100f64).powf(i as f64 / 23.0);
            let eps = Complex64::new(2.0, 0.0) + 1e28 / Complex64::new(4e28 - w * w, -3e13 * w);
            (w, eps)
        });
        let table = PermittivityTable::from_samples("lorentz", "", samples).unwrap();
        let shape = EllipsoidShape::with_density(20e-9, 35e-9, 60e-9, 2200.0).unwrap();
        SmallParticle::new(shape, table, 600.0, DepolarizationMode::Exact).unwrap()
    })
}

fn unit(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

fn rotation(t: f64, p: f64, angle: f64) -> Orientation {
    Orientation::from_axis_angle(&unit(t, p), angle).unwrap()
}

#[test]
fn sphere_orientational_rate_is_isotropic_closed_form() {
    let p = silica_sphere();
    let gamma = p.total_emission_rate().unwrap().value;
    let r = rotation(0.3, 1.0, 0.8);
    for theta in [0.0, PI / 4.0, PI / 2.0, PI] {
        let rp = r * rotation(1.2, -0.4, theta);
        let f = p.orientational_localization_rate(&r, &rp).unwrap();
        let want = 2.0 / 3.0 * gamma * (1.0 - theta.cos());
        assert!((f - want).abs() <= 1e-8 * want.max(gamma * 1e-3), "θ = {theta}: {f} vs {want}");
    }
}

#[test]
fn anisotropic_rate_matches_lab_frame_trace() {
    // Oracle: ∫ω³n̄/(3π²c³ε₀) Tr[R α″ Rᵀ (𝟙 − R′Rᵀ)] with the full lab-frame tensor.
    let p = silica_ellipsoid();
    let r = rotation(0.4, 2.0, 1.3);
    let rp = rotation(2.2, -1.0, 2.5);
    let got = p.orientational_localization_rate(&r, &rp).unwrap();
    let lab = |w: f64| -> f64 {
        let a = p.polarizability(w).unwrap().anti_hermitian_part();
        let lab = r.matrix() * a * r.matrix().transpose();
        let proj = Matrix3::identity() - rp.matrix() * r.matrix().transpose();
        w.powi(3) * bose_occupation(w, 1000.0).unwrap() / (3.0 * PI * PI * C.powi(3) * EPS0) * (lab * proj).trace()
    };
    let want = p.integrate(|w| Ok(lab(w))).unwrap().value;
    assert!((got - want).abs() <= 1e-9 * want);
}

#[test]
fn large_separation_approaches_emission_rate() {
    let p = silica_sphere();
    let gamma = p.total_emission_rate().unwrap().value;
    let dist = 1e3 * C / p.window().peak_omega;
    let f = p
        .localization_rate_full(&Orientation::identity(), &Orientation::identity(), &(unit(0.7, 0.3) * dist))
        .unwrap();
    assert!((f.re / gamma - 1.0).abs() < 0.02, "{}", f.re / gamma);
}

#[test]
fn coincident_states_do_not_decohere() {
    let p = silica_ellipsoid();
    let gamma = p.total_emission_rate().unwrap().value;
    let r = rotation(1.0, 0.5, 2.0);
    let f = p.localization_rate_full(&r, &r, &Vector3::zeros()).unwrap();
    assert!(f.re.abs() <= 1e-10 * gamma);
    assert_eq!(f.im, 0.0);
}

#[test]
fn via_k_vanishes_for_coincident_states() {
    let p = coarse_particle();
    let r = rotation(1.0, 0.5, 2.0);
    let f = p.localization_rate_via_k(&r, &r, &Vector3::zeros()).unwrap();
    assert_eq!(f.re, 0.0);
    assert_eq!(f.im, 0.0);
}

#[test]
fn sphere_heating_matches_isotropic_form() {
    let p = silica_sphere();
    let h = p.heating_rates().unwrap();
    let rates = p.axis_rates().unwrap();
    let i = p.shape().moments_of_inertia();
    for k in 0..3 {
        let want = HBAR * HBAR / (2.0 * i[k]) * 2.0 / 3.0 * rates.total();
        assert!((h.h_rot[k] - want).abs() <= 1e-10 * want);
    }
    assert!((h.h_cm[0] - h.h_cm[2]).abs() <= 1e-12 * h.h_cm[0]);
}

#[test]
fn center_of_mass_heating_uses_fifth_moment() {
    // h_cm·2m·15π²c⁵ε₀/ħ² = ∫ω⁵n̄(2 tr α″ − αⱼ″)
    let p = silica_ellipsoid();
    let h = p.heating_rates().unwrap();
    for j in 0..3 {
        let moment = p
            .integrate(|w| {
                let a = p.polarizability(w)?.imag_eigenvalues();
                Ok(w.powi(5) * bose_occupation(w, 1000.0)? * (2.0 * a.sum() - a[j]))
            })
            .unwrap()
            .value;
        let lhs = h.h_cm[j] * 2.0 * p.shape().mass() * 15.0 * PI * PI * C.powi(5) * EPS0 / (HBAR * HBAR);
        assert!((lhs / moment - 1.0).abs() < 1e-9);
    }
}

#[test]
fn isotropic_state_diffusion() {
    let p = silica_sphere();
    let gamma = p.total_emission_rate().unwrap().value;
    let d = p.angular_momentum_diffusion(&OrientationMoments::isotropic()).unwrap();
    let want = 2.0 / 3.0 * HBAR * HBAR * gamma;
    assert!((d - Matrix3::identity() * want).abs().max() <= 1e-9 * want);
}

#[test]
fn diffusion_trace_identity() {
    let p = silica_ellipsoid();
    let gamma = p.total_emission_rate().unwrap().value;
    let d = p.angular_momentum_diffusion(&OrientationMoments::point(&rotation(0.3, 0.9, 1.7))).unwrap();
    assert!((d.trace() / (2.0 * HBAR * HBAR * gamma) - 1.0).abs() < 1e-9);
}

#[test]
fn heating_is_size_independent_at_fixed_aspect() {
    let p = silica_ellipsoid();
    let q = p.with_shape(EllipsoidShape::with_density(60e-9, 100e-9, 180e-9, 2200.0).unwrap()).unwrap();
    let (hp, hq) = (p.heating_rates().unwrap(), q.heating_rates().unwrap());
    let (lp, lq) = (p.shape().equivalent_radius(), q.shape().equivalent_radius());
    for k in 0..3 {
        assert!((hq.h_cm[k] / hp.h_cm[k] - 1.0).abs() < 1e-6);
        assert!((hq.h_rot[k] * lq * lq / (hp.h_rot[k] * lp * lp) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn rotor_rate_is_the_symmetry_axis_rate() {
    let shape = EllipsoidShape::spheroid(80e-9, 30e-9, 1e-18).unwrap();
    let p = silica_sphere().with_shape(shape).unwrap();
    let g = p.rotor_rate().unwrap();
    let m = Vector3::z();
    let mp = unit(1.0, 0.3);
    let f = p.linear_rotor_rate(&m, &mp, &Vector3::zeros()).unwrap();
    assert!((f.re - g * (1.0 - m.dot(&mp))).abs() <= 1e-10 * g);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn covariance_under_common_rotation(t in 0.0..PI, f in -PI..PI, a in -3.0..3.0f64,
                                        t2 in 0.0..PI, f2 in -PI..PI, b in -3.0..3.0f64,
                                        dt in 0.0..PI, df in -PI..PI, dist in 0.0..2e-6f64) {
        let p = silica_ellipsoid();
        let r = rotation(t, f, a);
        let rp = rotation(t2, f2, b);
        let dx = unit(dt, df) * dist;
        let lhs = p.localization_rate_full(&r, &rp, &dx).unwrap();
        let rel = Orientation::new(r.relative_to(&rp)).unwrap();
        let rhs = p.localization_rate_full(&Orientation::identity(), &rel, &(r.matrix().transpose() * dx)).unwrap();
        prop_assert!((lhs.re - rhs.re).abs() <= 1e-10 * lhs.re.abs().max(1.0));
    }

    #[test]
    fn rate_is_bounded_by_twice_emission(t in 0.0..PI, f in -PI..PI, a in -3.0..3.0f64,
                                         dt in 0.0..PI, df in -PI..PI, dist in 0.0..5e-6f64) {
        let p = silica_ellipsoid();
        let gamma = p.total_emission_rate().unwrap().value;
        let f = p.localization_rate_full(&Orientation::identity(), &rotation(t, f, a), &(unit(dt, df) * dist)).unwrap();
        prop_assert!(f.re >= -1e-12 * gamma);
        prop_assert!(f.re <= 2.0 * gamma * (1.0 + 1e-6));
    }

    #[test]
    fn sphere_rate_is_invariant_under_joint_rotation(t in 0.0..PI, f in -PI..PI, a in -3.0..3.0f64,
                                                     g in -3.0..3.0f64, dist in 0.0..2e-6f64) {
        let p = silica_sphere();
        let q = rotation(t, f, a);
        let rp = rotation(1.0, 2.0, g);
        let dx = unit(0.4, 0.1) * dist;
        let base = p.localization_rate_full(&Orientation::identity(), &rp, &dx).unwrap();
        let turned = p.localization_rate_full(&q, &(q * rp), &q.rotate(&dx)).unwrap();
        prop_assert!((base.re - turned.re).abs() <= 1e-10 * base.re.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn amplitude_rate_is_nonnegative(t in 0.0..PI, f in -PI..PI, a in -3.0..3.0f64,
                                     dt in 0.0..PI, df in -PI..PI, dist in 0.0..1e-6f64) {
        let p = coarse_particle();
        let r = p.localization_rate_via_k(&Orientation::identity(), &rotation(t, f, a), &(unit(dt, df) * dist)).unwrap();
        prop_assert!(r.re >= 0.0);
    }
}
