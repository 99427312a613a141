//! Universal barrier of polytopes.
//!
//! - [`geometry`]: polytopes, polar bodies, vertex enumeration, triangulation.
//! - [`moments`]: exact volume and directional moments over triangulations.
//! - [`barrier`]: `phi(x) = log Vol(K°(x))`, its derivatives and a sampled
//!   self-concordance certifier.
//! - [`sconcave`]: affine-power distributions and the sharp moment inequalities.
//! - [`cascade`]: exact verification of the derivative-chain positivity proofs.
//! - [`solver`]: damped-Newton path following for linear objectives.

pub mod barrier;
pub mod cascade;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod moments;
pub mod scalar;
pub mod sconcave;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{Halfspace, Polytope, PolytopeSpec, Simplex, Tolerances};
pub use scalar::Scalar;

/// Default seed used by every sampler.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;
