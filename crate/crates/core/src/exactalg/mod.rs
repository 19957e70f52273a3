//! Exact linear algebra over Q and F_p, integer Smith normal form and
//! homology of free chain complexes over Z.

mod chain;
mod field;
mod integer;
mod matrix;

pub use chain::{homology, homology_generators, ChainComplex, HomologyBasis, HomologyGroup, HomologySummary};
pub use field::{format_rational, parse_rational, ExactScalar, Field};
pub use integer::{integer_kernel, smith_normal_form, IntegerMatrix, SmithDecomposition};
pub use matrix::{composite, rank, rank_of_composite, Echelon, ExactMatrix};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("{value} is not an element of {field}")]
    NotInField { value: String, field: Field },
    #[error("unknown field {0:?} (expected q, f2, f3, fp:<p>)")]
    UnknownField(String),
    #[error("matrix is not square: {0:?}")]
    NotSquare((usize, usize)),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),
}
