//! Exact construction and verification of Lebesgue-measure-preserving
//! piecewise-linear circle maps, their crooked perturbations, a staged
//! construction of pseudo-circle-generating maps, and a floating-point
//! annulus attractor model.

pub mod bbm;
pub mod error;
pub mod generators;
pub mod io;
pub mod pipeline;
pub mod plcore;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use plcore::{Arc, LiftF64, PLLift, PlFn};
pub use rational::{q, Rational};

/// Default cap on the number of vertices a single exact map may hold.
pub const DEFAULT_VERTEX_BUDGET: usize = 10_000_000;

/// Default cap on iteration counts for covering-time searches.
pub const DEFAULT_ITERATION_CAP: usize = 64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
