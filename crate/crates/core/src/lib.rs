//! Structured-semantic guidance for an analytic diffusion sandbox.
//!
//! A text prompt is parsed into a disambiguated knowledge graph whose
//! triplets are split into identity, relation, attribute, and negative
//! constraint groups. Group-wise losses over cross-attention maps, weighted
//! by a timestep schedule, steer a variance-preserving reverse diffusion
//! process through an exactly solvable Gaussian-mixture world, so every
//! mechanism can be checked against closed forms and finite differences.

pub mod error;
pub mod kg;
pub mod rng;
pub mod schedule;

pub use error::{Error, Result};
