use thiserror::Error;

/// Error type shared by every module of the crate.
///
/// Infeasible/Unbounded LP *statuses* are not errors (see [`crate::lp`]);
/// the variants here mark contract violations on polytope-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive decomposition")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is not full-dimensional: affine hull has dimension {dimension} in ambient dimension {ambient}")]
    NotFullDimensional { dimension: usize, ambient: usize },
    #[error("time {0} is outside the shrinking range")]
    TimeOutOfRange(String),
    #[error("sublattice is not saturated in the ambient lattice")]
    NotSaturated,
    #[error("weights must be positive and coprime with last weight 1")]
    BadWeights,
    #[error("origin is not strictly interior to the polytope")]
    OriginNotInterior,
    #[error("no positive relation among the normals; the polytope is not compact")]
    Infeasible,
    #[error("constraint normals do not span the ambient space")]
    RankDeficient,
    #[error("not a reflexive companion: some offset differs from 1")]
    NotReflexiveCompanion,
    #[error("no integer relation found within the search bound")]
    NoRelationFound,
    #[error("certificate check failed: {0}")]
    CertificateCheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
