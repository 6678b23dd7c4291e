//! Mixed sparse linear regression toolkit.
//!
//! Instance generation, CORR screening, recovery pipelines, exact low-degree
//! chi-square evaluation, average-case reductions and a Monte-Carlo harness.

pub mod corr;
pub mod error;
pub mod gen;
pub mod harness;
pub mod io;
pub mod lowdeg;
pub mod model;
pub mod recovery;
pub mod reductions;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};

#[cfg(test)]
mod invariants;
