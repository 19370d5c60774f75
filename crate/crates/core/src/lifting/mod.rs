//! Lifting problems, the small object argument and Kan conditions.

pub mod kan;
pub mod problem;
pub mod soa;

pub use kan::{ex_extension_all, ex_extension_check, kan_check, kan_check_along, ExtensionWitness, KanReport};
pub use problem::{find_extension, find_lift, has_rlp, GeneratingSet, GeneratingSetName, LiftingProblem, RlpCertificate};
pub use soa::{soa_factorize, Factorization, DEFAULT_ROUND_CAP};
