//! Exact oracles, stability margins, structural checkers and solvers for
//! Steiner tree instances that are stable under multiplicative weight
//! perturbations.

pub mod cli;
pub mod error;
pub mod exact;
pub mod generators;
pub mod model;
mod mst;
pub mod solvers;
pub mod stability;
pub mod stp;
pub mod structure;

pub use error::{Error, Result};
pub use model::{Edge, Instance, SteinerTree, VertexId};
