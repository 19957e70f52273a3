use serde::{Deserialize, Serialize};

use super::abelian::abelianization;
use super::coset::{todd_coxeter, DEFAULT_MAX_COSETS};
use super::quotient::{search_nontrivial_quotient, PermutationWitness};
use super::word::Presentation;
use super::GroupError;
use crate::exactalg::HomologyGroup;

/// Resource bounds for the semidecision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_cosets: usize,
    pub max_degree: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_cosets: DEFAULT_MAX_COSETS,
            max_degree: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NontrivialityWitness {
    /// `H_1` is nonzero.
    Abelianization { h1: HomologyGroup },
    /// Coset enumeration closed with more than one coset.
    FiniteOrder { order: usize },
    /// A nontrivial permutation representation.
    Permutation { witness: PermutationWitness },
}

impl NontrivialityWitness {
    /// Rechecks the witness from scratch.
    pub fn verify(&self, p: &Presentation, max_cosets: usize) -> bool {
        match self {
            Self::Abelianization { h1 } => !h1.is_zero() && abelianization(p) == *h1,
            Self::FiniteOrder { order } => {
                *order > 1 && todd_coxeter(p, max_cosets.max(*order)).map(|t| t.order()) == Ok(*order)
            }
            Self::Permutation { witness } => witness.verify(p),
        }
    }
}

/// Outcome of the triviality semidecision. `Unknown` is a genuine answer:
/// no procedure settles triviality for every finite presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TrivialityOutcome {
    /// Coset enumeration over the trivial subgroup closed with one coset.
    Trivial,
    Nontrivial { witness: NontrivialityWitness },
    Unknown,
}

impl TrivialityOutcome {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Self::Trivial)
    }

    pub fn is_nontrivial(&self) -> bool {
        matches!(self, Self::Nontrivial { .. })
    }
}

/// Abelianization first, then coset enumeration, then permutation quotients.
pub fn triviality_semidecide(p: &Presentation, budget: Budget) -> Result<TrivialityOutcome, GroupError> {
    let h1 = abelianization(p);
    if !h1.is_zero() {
        return Ok(TrivialityOutcome::Nontrivial {
            witness: NontrivialityWitness::Abelianization { h1 },
        });
    }
    match todd_coxeter(p, budget.max_cosets) {
        Ok(t) if t.order() == 1 => return Ok(TrivialityOutcome::Trivial),
        Ok(t) => {
            return Ok(TrivialityOutcome::Nontrivial {
                witness: NontrivialityWitness::FiniteOrder { order: t.order() },
            })
        }
        Err(GroupError::Exceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(match search_nontrivial_quotient(p, budget.max_degree)? {
        Some(witness) => TrivialityOutcome::Nontrivial {
            witness: NontrivialityWitness::Permutation { witness },
        },
        None => TrivialityOutcome::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::catalog;
    use num_bigint::BigInt;

    #[test]
    fn killed_generators() {
        let p = Presentation::parse(2, &["a", "b"]).unwrap();
        assert_eq!(triviality_semidecide(&p, Budget::default()).unwrap(), TrivialityOutcome::Trivial);
    }

    #[test]
    fn order_two_via_h1() {
        let out = triviality_semidecide(&Presentation::cyclic(2), Budget::default()).unwrap();
        let h1 = HomologyGroup { betti: 0, torsion: vec![BigInt::from(2)] };
        assert_eq!(
            out,
            TrivialityOutcome::Nontrivial { witness: NontrivialityWitness::Abelianization { h1 } }
        );
    }

    #[test]
    fn icosahedral_with_tiny_budget_uses_quotient() {
        let p = catalog::binary_icosahedral();
        let tiny = Budget { max_cosets: 8, max_degree: 5 };
        match triviality_semidecide(&p, tiny).unwrap() {
            TrivialityOutcome::Nontrivial { witness: w @ NontrivialityWitness::Permutation { .. } } => {
                assert!(w.verify(&p, 8));
            }
            other => panic!("unexpected {other:?}"),
        }
        let full = triviality_semidecide(&p, Budget::default()).unwrap();
        assert_eq!(
            full,
            TrivialityOutcome::Nontrivial { witness: NontrivialityWitness::FiniteOrder { order: 120 } }
        );
    }

    #[test]
    fn starved_search_is_unknown() {
        let p = catalog::binary_icosahedral();
        let starved = Budget { max_cosets: 8, max_degree: 4 };
        assert_eq!(triviality_semidecide(&p, starved).unwrap(), TrivialityOutcome::Unknown);
    }

    #[test]
    fn outcome_json() {
        let out = triviality_semidecide(&Presentation::cyclic(3), Budget::default()).unwrap();
        let s = serde_json::to_string(&out).unwrap();
        assert!(s.contains("\"outcome\":\"nontrivial\""));
        assert_eq!(serde_json::from_str::<TrivialityOutcome>(&s).unwrap(), out);
    }
}
