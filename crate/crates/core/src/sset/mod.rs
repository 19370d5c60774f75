//! Simplicial sets in Eilenberg–Zilber normal form, maps between them, and
//! the standard constructions.

pub mod cells;
pub mod colimit;
pub mod levelwise;
mod map;
pub mod product;
pub mod search;
pub mod serial;
mod simplicial_set;
pub mod standard;

pub use map::SimplicialMap;
pub use simplicial_set::{Cell, SimplexRef, SimplicialSet};
