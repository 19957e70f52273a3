//! Growth-rate verdicts for constructed domains.
//!
//! The symplectic statements are encoded as a fixed set of inference rules
//! whose truth is trusted, not computed. A verdict records the combinatorial
//! facts fed into each rule, so that [`replay`] can re-derive its bounds
//! without reference to the code that produced it.

mod derive;
mod replay;
mod rules;

pub use derive::{cn_comparison, distinguish, np_verdict, CnComparison, Distinction};
pub use replay::{replay, ReplayOutcome};
pub use rules::{rule, rules, Rule, RuleId, RuleStatus, DISCLAIMER};

use serde::{Deserialize, Serialize};

use crate::fds::GrowthRate;
use crate::groups::{GroupError, NontrivialityWitness};
use crate::handles::HandleError;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum VerdictError {
    #[error("step {step} ({rule}): {reason}")]
    Replay { step: usize, rule: RuleId, reason: String },
    #[error("replayed {field} is {replayed}, verdict records {recorded}")]
    Mismatch {
        field: &'static str,
        replayed: String,
        recorded: String,
    },
    #[error("construction left no {0} event in the ledger history")]
    MissingEvent(&'static str),
    #[error(transparent)]
    Handle(#[from] HandleError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Finite,
    Infinite,
    /// A positive lower bound, no upper bound.
    Interval,
    Unknown,
}

impl Conclusion {
    /// Reads a conclusion off a pair of bounds.
    pub fn from_bounds(lower: &GrowthRate, upper: &GrowthRate) -> Self {
        if *lower == GrowthRate::Infinity {
            Conclusion::Infinite
        } else if *upper != GrowthRate::Infinity {
            Conclusion::Finite
        } else if *lower > GrowthRate::zero() {
            Conclusion::Interval
        } else {
            Conclusion::Unknown
        }
    }

    pub fn is_definite(self) -> bool {
        matches!(self, Conclusion::Finite | Conclusion::Infinite)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupFact {
    Trivial,
    Nontrivial,
    Unknown,
}

/// Bounds on the growth rate of one piece of a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: GrowthRate,
    pub upper: GrowthRate,
}

/// A combinatorial input to a rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Fact {
    /// The domain is the completed output of the three-factor pipeline.
    NpConstruction { half_dim: usize },
    GroupTrivial,
    GroupNontrivial { witness: NontrivialityWitness },
    /// Neither a proof of triviality nor a witness within the budget.
    GroupUndecided { max_cosets: usize, max_degree: usize },
    /// The boundary model's group is a free product of three copies of one
    /// group.
    TripleFreeProduct { factors: usize },
    /// A surface factor whose growth rate is at least `lower`.
    SurfaceFactor { lower: GrowthRate },
    AffineModel { complex_dim: usize },
    /// The domain is a subcritical attachment on a domain with these bounds.
    SubcriticalAttachment { index: usize, half_dim: usize, before: Bounds },
    StandardSphereFilling,
    DisjointUnion { components: Vec<Bounds> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationStep {
    pub rule: RuleId,
    pub facts: Vec<Fact>,
}

impl DerivationStep {
    pub fn new(rule: RuleId, facts: Vec<Fact>) -> Self {
        Self { rule, facts }
    }
}

/// Bounds on a growth rate together with the rules that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub lower: GrowthRate,
    pub upper: GrowthRate,
    pub conclusion: Conclusion,
    pub group_fact: GroupFact,
    pub derivation: Vec<DerivationStep>,
}

impl Verdict {
    pub fn rule_ids(&self) -> Vec<RuleId> {
        self.derivation.iter().map(|s| s.rule).collect()
    }
}
