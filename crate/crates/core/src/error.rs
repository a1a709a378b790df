use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("column {0} does not lie in the lattice")]
    NotInLattice(usize),
    #[error("no integral conjugating automorphism exists")]
    NoIntegralSolution,
    #[error("matrix is not invertible modulo p")]
    NotInvertible,
    #[error("tuple is not a commuting tuple of p-power order elements")]
    NotPPowerTuple,
    #[error("element subset is not a subgroup")]
    NotASubgroup,
    #[error("map is not a group homomorphism")]
    NotAHomomorphism,
    #[error("{what} has size {size}, above the cap {cap}")]
    TooLarge {
        what: String,
        size: usize,
        cap: usize,
    },
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("subgroup of order p^{log_order} lies outside the section bound p^{bound}")]
    SectionOutOfRange { log_order: u32, bound: u32 },
    #[error("coefficient {0} is not p-integral")]
    NonIntegralCoefficient(String),
    #[error("no unit coefficient up to degree {0}")]
    NoUnitCoefficient(usize),
    #[error("invalid group spec {spec:?}: {reason}")]
    InvalidGroupSpec { spec: String, reason: String },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
