//! Bose–Einstein occupation and thermal spectral windows.

use super::constants::{HBAR, K_B};
use super::table::PermittivityTable;
use crate::error::{Error, Result};
use crate::numerics::{FrequencyGrid, RefinementPolicy};

/// Location of the maximum of x³/(eˣ − 1), the root of 3(1 − e⁻ˣ) = x.
pub const THERMAL_PEAK_X: f64 = 2.821_439_372_122_078_9;

/// Fraction of the peak of ω³n̄ below which the spectrum is truncated.
pub const SPECTRAL_CUTOFF: f64 = 1e-12;

fn check(omega: f64, temperature: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Argument(format!("angular frequency must be positive, got {omega}")));
    }
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::Argument(format!("temperature must be positive, got {temperature}")));
    }
    Ok(())
}

/// Occupation 1/(eˣ − 1) as a function of x = ħω/k_BT.
pub fn bose_of_x(x: f64) -> f64 {
    if x < 1e-5 {
        1.0 / x - 0.5 + x / 12.0
    } else if x > 700.0 {
        0.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// Mean photon number n̄(ω, T).
pub fn bose_occupation(omega: f64, temperature: f64) -> Result<f64> {
    check(omega, temperature)?;
    Ok(bose_of_x(HBAR * omega / (K_B * temperature)))
}

/// Spectral weight ω³ n̄(ω, T) [rad³/s³].
pub fn thermal_weight(omega: f64, temperature: f64) -> Result<f64> {
    Ok(omega.powi(3) * bose_occupation(omega, temperature)?)
}

/// Angular frequency of the maximum of ω³n̄ at `temperature`.
pub fn thermal_peak_omega(temperature: f64) -> f64 {
    THERMAL_PEAK_X * K_B * temperature / HBAR
}

fn shape(x: f64) -> f64 {
    x.powi(3) * bose_of_x(x)
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Range of x = ħω/k_BT where x³n̄(x) exceeds `cutoff` times its peak.
pub fn thermal_window_x(cutoff: f64) -> (f64, f64) {
    let level = cutoff * shape(THERMAL_PEAK_X);
    let g = |x: f64| shape(x) - level;
    (bisect(1e-300_f64.max(level.sqrt() * 1e-3), THERMAL_PEAK_X, g), bisect(THERMAL_PEAK_X, 800.0, g))
}

/// Frequency range of a thermal integral after truncation and clipping to
/// the material table.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralWindow {
    /// Untruncated thermal window [rad/s].
    pub thermal: (f64, f64),
    /// Table support [rad/s].
    pub support: (f64, f64),
    /// Intersection of the two, `None` when they do not overlap.
    pub range: Option<(f64, f64)>,
    /// Frequency of the maximum of ω³n̄ [rad/s].
    pub peak_omega: f64,
}

impl SpectralWindow {
    pub fn new(table: &PermittivityTable, temperature: f64) -> Result<Self> {
        check(1.0, temperature)?;
        let (xl, xh) = thermal_window_x(SPECTRAL_CUTOFF);
        let scale = K_B * temperature / HBAR;
        let thermal = (xl * scale, xh * scale);
        let support = table.support();
        let lo = thermal.0.max(support.0);
        let hi = thermal.1.min(support.1);
        Ok(SpectralWindow {
            thermal,
            support,
            range: (lo < hi).then_some((lo, hi)),
            peak_omega: thermal_peak_omega(temperature),
        })
    }

    /// Window of an emitter without tabulated data (black body).
    pub fn unbounded(temperature: f64) -> Result<Self> {
        check(1.0, temperature)?;
        let (xl, xh) = thermal_window_x(SPECTRAL_CUTOFF);
        let scale = K_B * temperature / HBAR;
        let thermal = (xl * scale, xh * scale);
        Ok(SpectralWindow {
            thermal,
            support: (0.0, f64::INFINITY),
            range: Some(thermal),
            peak_omega: thermal_peak_omega(temperature),
        })
    }

    pub fn peak_covered(&self) -> bool {
        self.peak_omega >= self.support.0 && self.peak_omega <= self.support.1
    }

    /// Human-readable notes about truncation by the table.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.peak_covered() {
            w.push(format!(
                "WARNING: thermal peak at {:.4e} rad/s lies outside the material table [{:.4e}, {:.4e}] rad/s; rates are dominated by missing data",
                self.peak_omega, self.support.0, self.support.1
            ));
        }
        if self.range.is_none() {
            w.push("WARNING: thermal window does not overlap the material table; all spectral integrals vanish".into());
        } else {
            if self.support.0 > self.thermal.0 {
                w.push(format!("note: spectrum truncated below {:.4e} rad/s (table start)", self.support.0));
            }
            if self.support.1 < self.thermal.1 {
                w.push(format!("note: spectrum truncated above {:.4e} rad/s (table end)", self.support.1));
            }
        }
        w
    }

    /// Integration grid over the window with the table nodes as panel
    /// boundaries, so that linear interpolation kinks fall on breakpoints.
    pub fn grid(&self, table: &PermittivityTable, policy: RefinementPolicy) -> Option<FrequencyGrid> {
        let (lo, hi) = self.range?;
        let grid = FrequencyGrid::clipped(table.omegas(), lo, hi, policy).ok()?;
        Some(grid.with_max_ratio(1.25))
    }
}
