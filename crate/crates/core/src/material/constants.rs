//! CODATA 2018 physical constants (SI).

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum [m/s].
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant [J/K].
pub const K_B: f64 = 1.380_649e-23;
/// Vacuum permittivity [F/m].
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Atomic mass unit [kg].
pub const AMU: f64 = 1.660_539_066_60e-27;

/// The constants above bundled as a value, for code that wants to pass them around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
    pub eps0: f64,
    pub amu: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants { hbar: HBAR, c: C, k_b: K_B, eps0: EPS0, amu: AMU };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}
