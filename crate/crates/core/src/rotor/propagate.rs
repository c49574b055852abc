use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{AngularBasis, AngularDensityMatrix};
use super::lindblad::LindbladGenerator;
use super::observables::rotor_observables;
use crate::error::{Error, Result};

/// Largest allowed product of step and generator stiffness.
pub const MAX_STEP_RATE: f64 = 0.1;

/// Largest tolerated |tr ρ + leakage − tr ρ₀|.
pub const MAX_TRACE_DRIFT: f64 = 1e-6;

const MAX_HERMITICITY_DEFECT: f64 = 1e-9;

/// Fixed-step settings for [`propagate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationSettings {
    /// End time [s].
    pub t_final: f64,
    /// Requested step [s]; shortened so that a whole number of steps ends at `t_final`.
    pub dt: f64,
    /// Keep every n-th state (the initial and final states are always kept).
    pub record_every: usize,
}

impl PropagationSettings {
    pub fn new(t_final: f64, dt: f64) -> Self {
        PropagationSettings { t_final, dt, record_every: 1 }
    }

    pub fn record_every(mut self, n: usize) -> Self {
        self.record_every = n.max(1);
        self
    }
}

/// Sampled solution of ∂ₜρ = Dρ.
#[derive(Debug, Clone)]
pub struct Trajectory {
    basis: AngularBasis,
    times: Vec<f64>,
    states: Vec<DMatrix<Complex64>>,
    leakage: Vec<f64>,
    max_hermiticity_defect: f64,
    max_trace_drift: f64,
}

impl Trajectory {
    pub fn basis(&self) -> AngularBasis {
        self.basis
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Recorded state `i`, possibly sub-normalized by leakage.
    pub fn state(&self, i: usize) -> AngularDensityMatrix {
        AngularDensityMatrix::unchecked(self.basis, self.states[i].clone()).expect("recorded states match the basis")
    }

    pub fn matrix(&self, i: usize) -> &DMatrix<Complex64> {
        &self.states[i]
    }

    pub fn final_state(&self) -> AngularDensityMatrix {
        self.state(self.len() - 1)
    }

    /// Population lost through the top shell up to each recorded time.
    pub fn leakage(&self) -> &[f64] {
        &self.leakage
    }

    pub fn max_hermiticity_defect(&self) -> f64 {
        self.max_hermiticity_defect
    }

    pub fn max_trace_drift(&self) -> f64 {
        self.max_trace_drift
    }

    /// CSV with columns t_s, re/im of the selected ρ entries (flat indices),
    /// Jx, Jy, Jz, Jsq and leakage.
    pub fn write_csv<W: Write>(&self, writer: W, entries: &[(usize, usize)]) -> Result<()> {
        let dim = self.basis.dim();
        if let Some(&(i, j)) = entries.iter().find(|(i, j)| *i >= dim || *j >= dim) {
            return Err(Error::Argument(format!("density matrix entry ({i}, {j}) outside dimension {dim}")));
        }
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["t_s".to_string()];
        for (i, j) in entries {
            header.push(format!("re_rho_{i}_{j}"));
            header.push(format!("im_rho_{i}_{j}"));
        }
        header.extend(["Jx", "Jy", "Jz", "Jsq", "leakage"].map(String::from));
        w.write_record(&header).map_err(std::io::Error::from)?;
        for k in 0..self.len() {
            let rho = &self.states[k];
            let obs = rotor_observables(&self.basis, rho);
            let mut row = vec![format!("{:e}", self.times[k])];
            for &(i, j) in entries {
                row.push(format!("{:e}", rho[(i, j)].re));
                row.push(format!("{:e}", rho[(i, j)].im));
            }
            for v in obs.angular_momentum.iter() {
                row.push(format!("{v:e}"));
            }
            row.push(format!("{:e}", obs.j_squared));
            row.push(format!("{:e}", self.leakage[k]));
            w.write_record(&row).map_err(std::io::Error::from)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Fixed-step RK4 integration of ∂ₜρ = Dρ from `rho0`.
///
/// The leakage through the top shell is integrated alongside ρ, and each
/// step checks that the lost trace matches it.
pub fn propagate(rho0: &AngularDensityMatrix, generator: &LindbladGenerator, settings: &PropagationSettings) -> Result<Trajectory> {
    let basis = generator.basis();
    if rho0.basis() != basis {
        return Err(Error::Argument(format!(
            "state has l_max {}, generator has l_max {}",
            rho0.basis().l_max(),
            basis.l_max()
        )));
    }
    let PropagationSettings { t_final, dt, record_every } = *settings;
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::Argument(format!("final time must be nonnegative, got {t_final}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Argument(format!("time step must be positive, got {dt}")));
    }
    if dt * generator.stiffness() > MAX_STEP_RATE * (1.0 + 1e-12) {
        return Err(Error::Argument(format!(
            "time step {dt:e} s exceeds {MAX_STEP_RATE}/{:e} 1/s",
            generator.stiffness()
        )));
    }
    let steps = (t_final / dt - 1e-9).ceil().max(0.0) as usize;
    let h = if steps == 0 { 0.0 } else { t_final / steps as f64 };
    let record_every = record_every.max(1);

    let mut rho = rho0.matrix().clone();
    let trace0 = rho.trace().re;
    let mut leak = 0.0;
    let mut out = Trajectory {
        basis,
        times: vec![0.0],
        states: vec![rho.clone()],
        leakage: vec![0.0],
        max_hermiticity_defect: 0.0,
        max_trace_drift: 0.0,
    };
    let half = Complex64::new(0.5 * h, 0.0);
    let full = Complex64::new(h, 0.0);
    for step in 1..=steps {
        let k1 = generator.apply(&rho);
        let r2 = &rho + &k1 * half;
        let k2 = generator.apply(&r2);
        let r3 = &rho + &k2 * half;
        let k3 = generator.apply(&r3);
        let r4 = &rho + &k3 * full;
        let k4 = generator.apply(&r4);
        let l = [&rho, &r2, &r3, &r4].map(|r| generator.leakage_rate(r));
        rho += (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0);
        leak += h / 6.0 * (l[0] + 2.0 * (l[1] + l[2]) + l[3]);

        let t = step as f64 * h;
        let herm = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let drift = (rho.trace().re + leak - trace0).abs();
        if !(drift <= MAX_TRACE_DRIFT) {
            return Err(Error::Integration(format!(
                "trace drift {drift:e} at t = {t:e} s exceeds {MAX_TRACE_DRIFT:e}; reduce dt or raise l_max"
            )));
        }
        if !(herm <= MAX_HERMITICITY_DEFECT) {
            return Err(Error::Integration(format!(
                "density matrix lost Hermiticity ({herm:e}) at t = {t:e} s; reduce dt"
            )));
        }
        out.max_hermiticity_defect = out.max_hermiticity_defect.max(herm);
        out.max_trace_drift = out.max_trace_drift.max(drift);
        if step % record_every == 0 || step == steps {
            out.times.push(t);
            out.states.push(rho.clone());
            out.leakage.push(leak);
        }
    }
    Ok(out)
}
