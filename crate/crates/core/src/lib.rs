//! Calculus of probability transformations induced by transitions between
//! preparation contexts.
//!
//! - [`probability`]: interference coefficients, behaviour classes
//!   (classical, trigonometric, hyperbolic, hyper-trigonometric), the forward
//!   transform and its admissible range, and the multi-valued decomposition.
//! - [`simulator`]: counting simulation showing the interference term arise from
//!   ensemble selection, with seeded, reproducible convergence studies.
//! - [`complex_rep`]: complex amplitudes, unitary and non-unitary ("memory")
//!   transition matrices.
//! - [`hyperbolic`] and [`hyperbolic_rep`]: the split-complex algebra and its
//!   two-dimensional module representation of hyperbolic interference.

pub mod complex_rep;
pub mod error;
pub mod hyperbolic;
pub mod hyperbolic_rep;
pub mod phase_family;
pub mod probability;
pub mod simulator;

pub use error::{Error, Result};
pub use hyperbolic::{Hyperbolic, PolarForm, Sign};
pub use phase_family::PhaseFamily;
pub use probability::{
    Behaviour, ContextDistribution, InterferenceProfile, OutcomeDistribution, Phase, PhaseKind,
    Tolerances, TransitionMatrix,
};
