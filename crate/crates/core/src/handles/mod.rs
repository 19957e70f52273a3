//! Homotopy ledgers for handle decompositions: a fundamental-group
//! presentation together with an integral cellular chain complex, and the
//! handle-attachment pipeline that turns a presentation into an acyclic,
//! simply connected domain.

mod framing;
mod ledger;
mod pipeline;

pub use framing::{framing_obstruction_group, HatDescriptor, ObstructionGroup};
pub use ledger::{attach_handle, end_connect_sum, ledger_from_presentation_complex, Handle, HomotopyLedger, LedgerEvent};
pub use pipeline::{
    build_n2, build_n4, build_np, core_group_status, product_with_t, synth_boundary_model, verify_contractible,
    ContractibilityOutcome,
};

use crate::exactalg::{AlgebraError, HomologyGroup};
use crate::groups::GroupError;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum HandleError {
    #[error("boundary of the {index}-handle is not a cycle")]
    NotACycle { index: usize },
    #[error("attaching word has exponent sums {word:?}, boundary vector is {boundary:?}")]
    WordBoundaryMismatch { word: Vec<i64>, boundary: Vec<String> },
    #[error("2-handles need an attaching word")]
    MissingWord,
    #[error("only 2-handles carry an attaching word")]
    UnexpectedWord,
    #[error("boundary vector has {found} entries, expected {expected}")]
    BoundaryLength { expected: usize, found: usize },
    #[error("0-handles would disconnect the ledger")]
    ZeroHandle,
    #[error("handle lives in half-dimension {handle}, ledger in {ledger}")]
    DimMismatch { ledger: usize, handle: usize },
    #[error("H_1 = {0} is nonzero")]
    H1Nonzero(HomologyGroup),
    #[error("half-dimension {0} leaves no room for the sphere cell (need at least 5)")]
    HalfDimTooSmall(usize),
    #[error("homology pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("framing bit {bit} is not an element of {group}")]
    IllegalFraming { bit: u8, group: ObstructionGroup },
    #[error("inconsistent ledger: {0}")]
    InvalidLedger(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
