//! Finitely presented groups: words, free products, abelianization,
//! coset enumeration, permutation quotients and conjugacy growth.

mod abelian;
pub mod catalog;
mod conjugacy;
mod coset;
mod finite;
mod quotient;
mod triviality;
mod word;

pub use abelian::{abelianization, exponent_matrix};
pub use conjugacy::{conjugacy_count, conjugacy_growth_rate, table_slope, ConjGrowthTable, GroupClass};
pub use coset::{todd_coxeter, DEFAULT_MAX_COSETS};
pub use finite::FiniteGroupTable;
pub use quotient::{search_nontrivial_quotient, PermutationWitness, MAX_QUOTIENT_DEGREE};
pub use triviality::{triviality_semidecide, Budget, NontrivialityWitness, TrivialityOutcome};
pub use word::{free_product, free_product_all, free_reduce, Presentation, Word};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid word {0:?}")]
    InvalidWord(String),
    #[error("word {word} uses a generator beyond {generators}")]
    GeneratorOutOfRange { word: String, generators: usize },
    #[error("coset enumeration exceeded {budget} live cosets")]
    Exceeded { budget: usize },
    #[error("budget must be positive")]
    InvalidBudget,
    #[error("quotient degree {0} outside 1..=6")]
    DegreeOutOfRange(usize),
    #[error("not a group table: {0}")]
    InvalidTable(String),
    #[error("unsupported group class: {0}")]
    UnsupportedClass(String),
    #[error("radius {radius} exceeds the limit {limit} for this class")]
    RadiusTooLarge { radius: usize, limit: usize },
    #[error("cannot parse group class {0:?}")]
    InvalidClass(String),
}
