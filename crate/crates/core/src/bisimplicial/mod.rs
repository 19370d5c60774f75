//! Bisimplicial sets, the diagonal adjunction, and the levelwise probes.

mod biset;
pub mod constructions;
pub mod matching;
pub mod search;
pub mod serial;

pub use biset::{BiCell, BiSimplexRef, BiSimplicialMap, BiSimplicialSet, HorizontalLevel};
pub use constructions::{
    const_geo, diag_extend, diag_restrict, external_product, fiber_subcomplex, horn_closed_form, DiagExtension,
    Diagonal,
};
pub use search::enumerate_bimaps;
pub use matching::{levelwise_pi0, match_object, pi0_fibration_probe, MatchObject, ProbeReport};
