//! Differential-geometric workbench for Lagrangian surfaces in `C²`.
//!
//! Surfaces are given by explicit charts, evaluated with truncated Taylor
//! jets, and pushed through a curvature pipeline whose outputs feed identity
//! residuals, energy integrals and numerical experiments.

pub mod ambient;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod identities;
pub mod integrate;
pub mod jets;
pub mod poly;
pub mod surface;
pub mod tensor;

pub use error::{Error, JetError, Result};
