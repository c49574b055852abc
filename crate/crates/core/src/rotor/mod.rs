//! Linear-rotor dynamics in a truncated |ℓ, m⟩ basis.

mod basis;
mod coherence;
mod lindblad;
mod observables;
mod operators;
mod propagate;
mod wigner;

pub use basis::{euler_zyz, rotation_operator, spherical_harmonics, AngularBasis, AngularDensityMatrix};
pub use coherence::{
    coherence_decay_rate, coherence_visibility, fit_coherence_decay, orientation_wavepacket, wavepacket_superposition,
    CoherenceFit, DEFAULT_FIT_THRESHOLD,
};
pub use lindblad::LindbladGenerator;
pub use observables::{rotor_observables, RotorObservables};
pub use operators::{BodyAxisOperators, SparseOperator};
pub use propagate::{propagate, PropagationSettings, Trajectory, MAX_STEP_RATE, MAX_TRACE_DRIFT};
pub use wigner::{wigner3j, wigner_d_element, wigner_small_d};
