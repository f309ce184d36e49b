//! Simulation and maximum-likelihood estimation for diffusion processes that
//! are sequentially observed up to the first hitting of an upper threshold.
//!
//! The crate covers the full pipeline: exact-transition simulation of killed
//! trajectories with a Bernoulli bridge-crossing correction, the killed-process
//! likelihood and its small-step approximations for the OU and square-root
//! models, derivative-free fitting, pooled multi-trajectory estimation,
//! parametric bootstrap bias correction, and a Monte Carlo study harness.

pub mod error;
pub mod exec;
pub mod models;
pub mod numerics;

pub use error::{Error, Result};
pub use models::{ModelKind, ModelSpec, ThresholdConfig};
