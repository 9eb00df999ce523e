//! Invariant theory for Coxeter and affine Weyl groups acting on Euclidean
//! space. Generator systems are assembled into an orbit-separating map whose
//! transnormal structure is checked numerically.

pub mod arrangements;
pub mod cli;
pub mod error;
pub mod forms;
pub mod invariants;
pub mod linalg;
pub mod num;
pub mod oracle;
pub mod reflection_groups;
pub mod root_systems;
pub mod sampling;
pub mod separator;
pub mod transnormal;

pub use error::{Error, Result};
pub use num::Num;
