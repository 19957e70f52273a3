use serde::{Deserialize, Serialize};

use super::{Conclusion, DerivationStep, Fact, GroupFact, RuleId, Verdict, VerdictError};
use crate::fds::GrowthRate;
use crate::groups::{abelianization, triviality_semidecide, Budget, Presentation, TrivialityOutcome};
use crate::handles::{build_np, HandleError, HomotopyLedger, LedgerEvent};

fn event<T>(l: &HomotopyLedger, name: &'static str, pick: impl Fn(&LedgerEvent) -> Option<T>) -> Result<T, VerdictError> {
    l.history().iter().find_map(pick).ok_or(VerdictError::MissingEvent(name))
}

/// Growth-rate verdict for the completed domain built from `p`.
pub fn np_verdict(p: &Presentation, n: usize, budget: Budget) -> Result<Verdict, VerdictError> {
    let h1 = abelianization(p);
    if !h1.is_zero() {
        return Err(HandleError::H1Nonzero(h1).into());
    }
    let ledger = build_np(p, n)?;
    let complex_dim = event(&ledger, "affine_model", |e| match e {
        LedgerEvent::AffineModel { complex_dim } => Some(*complex_dim),
        _ => None,
    })?;
    let surface = event(&ledger, "product_with_surface", |e| match e {
        LedgerEvent::ProductWithSurface { growth_lower_bound, .. } => Some(growth_lower_bound.clone()),
        _ => None,
    })?;
    event(&ledger, "triple_free_product", |e| match e {
        LedgerEvent::TripleFreeProduct { .. } => Some(()),
        _ => None,
    })?;
    let np = Fact::NpConstruction {
        half_dim: ledger.half_dim(),
    };
    let mut derivation = vec![DerivationStep::new(RuleId::R1, vec![np.clone()])];
    let (lower, upper, group_fact) = match triviality_semidecide(p, budget)? {
        TrivialityOutcome::Trivial => {
            derivation.push(DerivationStep::new(RuleId::R2, vec![np, Fact::GroupTrivial]));
            derivation.push(DerivationStep::new(RuleId::R6, vec![Fact::AffineModel { complex_dim }]));
            (GrowthRate::zero(), GrowthRate::integer(complex_dim as i64), GroupFact::Trivial)
        }
        TrivialityOutcome::Nontrivial { witness } => {
            let fact = Fact::GroupNontrivial { witness };
            derivation.push(DerivationStep::new(RuleId::R2, vec![np, fact.clone()]));
            derivation.push(DerivationStep::new(RuleId::R3, vec![fact, Fact::TripleFreeProduct { factors: 3 }]));
            derivation.push(DerivationStep::new(RuleId::R9, vec![Fact::SurfaceFactor { lower: surface }]));
            derivation.push(DerivationStep::new(RuleId::R4, vec![]));
            (GrowthRate::Infinity, GrowthRate::Infinity, GroupFact::Nontrivial)
        }
        TrivialityOutcome::Unknown => {
            let fact = Fact::GroupUndecided {
                max_cosets: budget.max_cosets,
                max_degree: budget.max_degree,
            };
            derivation.push(DerivationStep::new(RuleId::R2, vec![np, fact]));
            (GrowthRate::zero(), GrowthRate::Infinity, GroupFact::Unknown)
        }
    };
    Ok(Verdict {
        conclusion: Conclusion::from_bounds(&lower, &upper),
        lower,
        upper,
        group_fact,
        derivation,
    })
}

/// Whether the growth rate separates two completed domains. Failing to
/// separate says nothing about whether they are symplectomorphic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distinction {
    Distinguished,
    NotDistinguished,
    Unknown,
}

pub fn distinguish(p1: &Presentation, p2: &Presentation, n: usize, budget: Budget) -> Result<Distinction, VerdictError> {
    let a = np_verdict(p1, n, budget)?.conclusion;
    let b = np_verdict(p2, n, budget)?.conclusion;
    Ok(if !a.is_definite() || !b.is_definite() {
        Distinction::Unknown
    } else if a != b {
        Distinction::Distinguished
    } else {
        Distinction::NotDistinguished
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CnComparison {
    NotStandardCn,
    Unknown,
}

/// Complex affine space has growth rate `-inf`, so any nonnegative lower
/// bound rules it out.
pub fn cn_comparison(v: &Verdict) -> CnComparison {
    if v.lower >= GrowthRate::zero() {
        CnComparison::NotStandardCn
    } else {
        CnComparison::Unknown
    }
}
