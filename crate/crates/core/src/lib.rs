//! Finite simplicial and bisimplicial sets with the machinery around Kan's
//! `Ex` functor and the Kan–Quillen model structure: subdivision, lifting
//! problems, the small object argument, and homotopy invariants.

pub mod bisimplicial;
pub mod harness;
pub mod error;
pub mod homotopy;
pub mod lifting;
pub mod op;
pub mod par;
pub mod sset;
pub mod subdivision;

pub use error::{Error, Result};
pub use sset::{SimplexRef, SimplicialMap, SimplicialSet};
