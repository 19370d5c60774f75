use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid simplex reference: {0}")]
    InvalidSimplex(String),

    #[error("simplicial identity d_{i} d_{j} = d_{jm1} d_{i} fails on {dim}-simplex #{id}", jm1 = j - 1)]
    SimplicialIdentity { dim: usize, id: usize, i: usize, j: usize },

    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),

    #[error("{dim}-simplex #{id} has a face outside the proposed subcomplex")]
    NotSubcomplex { dim: usize, id: usize },

    #[error("map is not a monomorphism: {dim}-simplices #{first} and #{second} collide")]
    NotMono { dim: usize, first: usize, second: usize },

    #[error("map is not a monomorphism: nondegenerate {dim}-simplex #{id} lands on a degenerate simplex")]
    DegenerateImage { dim: usize, id: usize },

    #[error("horn index out of range: n = {n}, i = {i}")]
    HornIndex { n: usize, i: usize },

    #[error("complement set must be a nonempty subset of [{n}]")]
    EmptyComplement { n: usize },

    #[error("truncation too shallow: need dimension {needed}, have {available}")]
    TruncationTooShallow { needed: usize, available: usize },

    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("resource cap exceeded: {what} (limit {limit}){}", stage.map(|s| format!(" at stage {s}")).unwrap_or_default())]
    ResourceCap { what: String, limit: usize, stage: Option<usize> },

    #[error("lifting problem does not commute: {0}")]
    NonCommutingSquare(String),

    #[error("extension guaranteed to exist was not found: {0}")]
    MissingExtension(String),

    #[error("{0}")]
    Serialization(String),

    #[error("config error at line {line}, field `{field}`: {message}")]
    Config { line: usize, field: String, message: String },
}

impl Error {
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}
