//! Optical constants, physical constants and thermal occupation.

pub mod constants;
mod table;
mod thermal;

pub use constants::PhysicalConstants;
pub use table::{load_nk_table, PermittivityTable};
pub use thermal::{
    bose_occupation, bose_of_x, thermal_peak_omega, thermal_weight, thermal_window_x, SpectralWindow,
    SPECTRAL_CUTOFF, THERMAL_PEAK_X,
};
