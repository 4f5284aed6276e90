//! Linear configuration systems over finite abelian groups: exact integer
//! matrix reductions, audited chains of equivalent systems, and colored
//! hypergraph representations. Every structural claim is verified by
//! enumeration at desk scale.

pub mod error;
pub mod group;
pub mod matrix;
pub mod apps;
pub mod cli;
pub mod hypergraph;
pub mod json;
pub mod pipeline;
pub mod perm;
pub mod rng;
pub mod system;

pub use error::{Error, Result};
