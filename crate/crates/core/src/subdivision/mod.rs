//! Barycentric subdivision, Kan's `Ex` and the `Ex` tower.

pub mod ex;
pub mod sd;

pub use ex::{
    check_adjunction, ex, ex_tower, unit_map, AdjunctionWitness, ExComplex, ExTower, ExTowerStage, TruncatedSSet,
};
pub use sd::{sd, sd_iter, Subdivision};
