//! Rigid-body geometry: orientations, ellipsoids, depolarization factors.

mod ellipsoid;
mod orientation;

pub use ellipsoid::{DepolarizationMode, EllipsoidShape};
pub use orientation::{rotation_angle, Displacement, Orientation};
