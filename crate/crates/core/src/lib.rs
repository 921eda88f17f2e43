//! Counting and growth-bound certification for (σ,ρ)-dominating sets.

pub mod catalog;
pub mod error;
pub mod numbers;
pub mod oracle;
pub mod pathwidth;
pub mod polytope;
pub mod sigma_rho;
pub mod states;
pub mod tree;

pub use error::{Error, Result};
