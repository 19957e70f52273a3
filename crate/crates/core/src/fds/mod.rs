//! Filtered directed systems on finite rational windows: ranks, growth,
//! morphisms, and checkable forms of the rank-comparison lemmas.

mod bigger;
mod filtration;
mod growth;
mod les;
mod morphism;
mod ops;
pub mod random;
mod split;
mod system;

pub use bigger::{bigger_than_check, bigger_than_rank_model, bigger_than_report, BiggerReport, BiggerViolation};
pub use filtration::{filtration_dominance_check, filtration_report, FiltrationFamily, FiltrationReport, FilteredComplex};
pub use growth::{estimate_growth_rate, growth_rate, log_slope, GrowthEstimate, GrowthRate, RankProfile};
pub use les::{les_collapse_isomorphism, ExactTriangle};
pub use morphism::{isomorphism_report, verify_isomorphism, verify_morphism, FdsMorphism, IsomorphismReport};
pub use ops::{direct_sum, tensor};
pub use split::{split_homology_bound_check, split_report, SplitFamily, SplitPointReport, SplitReport};
pub use system::{align, ConcreteFds};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exactalg::AlgebraError;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum FdsError {
    #[error("index {index} out of range for {len} grid points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("colimit requested on a system not marked stabilized")]
    NotStabilized,
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("sequence not exact {0}")]
    NotExact(String),
    #[error("square does not commute: {0}")]
    NotCommuting(String),
    #[error("third system survives its C-shift at grid point {0}")]
    UTailNotTrivial(usize),
    #[error("no preimage at grid point {0}")]
    NoSolution(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("block structure violated: {0}")]
    BlockStructureViolated(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Grid of integer points, for tests and examples.
pub fn int_grid(xs: &[i64]) -> Vec<BigRational> {
    xs.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}
