//! Elementary verification oracles: components, integral homology, homology
//! equivalences, collapses and edge-path presentations.

pub mod chain;
pub mod collapse;
pub mod homology;
pub mod pi0;
pub mod presentation;
pub mod snf;

pub use chain::ChainComplex;
pub use collapse::{collapse_search, CollapseCertificate, CollapseOutcome};
pub use homology::{homology, is_homology_equivalence, EquivalenceVerdict, HomologyGroup, HomologyResult};
pub use pi0::{pi0, Components};
pub use presentation::{edge_path_presentation, Presentation};
pub use snf::invariant_factors;
