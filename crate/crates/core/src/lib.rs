#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail range checks

pub mod error;
pub mod geometry;
pub mod large_particle;
pub mod material;
pub mod numerics;
pub mod optics;
pub mod rotor;
pub mod small_particle;

pub use error::{Error, Result};

/// Library version, echoed in output provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/materials.md")]
    mod materials {}
    #[doc = include_str!("../../../book/src/small-particles.md")]
    mod small_particles {}
    #[doc = include_str!("../../../book/src/large-particles.md")]
    mod large_particles {}
    #[doc = include_str!("../../../book/src/rotor.md")]
    mod rotor {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
