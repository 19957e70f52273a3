use serde::{Deserialize, Serialize};

use super::{Conclusion, DerivationStep, Fact, GroupFact, RuleId, Verdict, VerdictError};
use crate::fds::GrowthRate;

/// What a derivation proves on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub lower: GrowthRate,
    pub upper: GrowthRate,
    pub conclusion: Conclusion,
    pub group_fact: GroupFact,
}

struct State {
    lower: GrowthRate,
    upper: GrowthRate,
    group: GroupFact,
    cotangent: Option<GrowthRate>,
    surface: Option<GrowthRate>,
    seen: Vec<RuleId>,
}

fn shape(facts: &[Fact], expected: usize) -> Result<(), String> {
    if facts.len() == expected {
        Ok(())
    } else {
        Err(format!("takes {expected} facts, got {}", facts.len()))
    }
}

impl State {
    fn apply(&mut self, step: &DerivationStep) -> Result<(), String> {
        let facts = step.facts.as_slice();
        match step.rule {
            RuleId::R1 => {
                shape(facts, 1)?;
                let Fact::NpConstruction { .. } = facts[0] else {
                    return Err("needs the pipeline construction".into());
                };
                self.lower = self.lower.clone().max(GrowthRate::zero());
            }
            RuleId::R2 => {
                shape(facts, 2)?;
                let Fact::NpConstruction { .. } = facts[0] else {
                    return Err("needs the pipeline construction".into());
                };
                if self.group != GroupFact::Unknown {
                    return Err("group already decided".into());
                }
                match &facts[1] {
                    Fact::GroupTrivial => self.group = GroupFact::Trivial,
                    Fact::GroupNontrivial { .. } => {
                        self.group = GroupFact::Nontrivial;
                        self.lower = GrowthRate::Infinity;
                    }
                    Fact::GroupUndecided { .. } => {}
                    other => return Err(format!("second fact must concern the group, got {other:?}")),
                }
            }
            RuleId::R3 => {
                shape(facts, 2)?;
                let (Fact::GroupNontrivial { .. }, Fact::TripleFreeProduct { factors }) = (&facts[0], &facts[1]) else {
                    return Err("needs a nontrivial group and a free product decomposition".into());
                };
                // two copies of Z/2 give polynomial conjugacy growth
                if *factors < 3 {
                    return Err(format!("{factors} factors do not force exponential conjugacy growth"));
                }
                if self.group == GroupFact::Trivial {
                    return Err("group was recorded as trivial".into());
                }
                self.cotangent = Some(GrowthRate::Infinity);
            }
            RuleId::R4 => {
                shape(facts, 0)?;
                let (Some(a), Some(b)) = (&self.cotangent, &self.surface) else {
                    return Err("both factors need a lower bound first".into());
                };
                self.lower = self.lower.clone().max(a.add(b));
            }
            RuleId::R5 => {
                shape(facts, 1)?;
                let Fact::SubcriticalAttachment { index, half_dim, before } = &facts[0] else {
                    return Err("needs a subcritical attachment".into());
                };
                if index >= half_dim {
                    return Err(format!("a {index}-handle is critical in half-dimension {half_dim}"));
                }
                self.lower = before.lower.clone();
                self.upper = before.upper.clone();
            }
            RuleId::R6 => {
                shape(facts, 1)?;
                let Fact::AffineModel { complex_dim } = facts[0] else {
                    return Err("needs an affine model".into());
                };
                self.upper = self.upper.clone().min(GrowthRate::integer(complex_dim as i64));
            }
            RuleId::R7 => {
                shape(facts, 1)?;
                let Fact::StandardSphereFilling = facts[0] else {
                    return Err("needs a standard filling".into());
                };
                self.lower = GrowthRate::MinusInfinity;
                self.upper = GrowthRate::MinusInfinity;
            }
            RuleId::R8 => {
                shape(facts, 1)?;
                let Fact::DisjointUnion { components } = &facts[0] else {
                    return Err("needs a disjoint union".into());
                };
                let (Some(lo), Some(hi)) = (
                    components.iter().map(|c| &c.lower).max(),
                    components.iter().map(|c| &c.upper).max(),
                ) else {
                    return Err("empty union".into());
                };
                self.lower = lo.clone();
                self.upper = hi.clone();
            }
            RuleId::R9 => {
                shape(facts, 1)?;
                let Fact::SurfaceFactor { lower } = &facts[0] else {
                    return Err("needs a surface factor".into());
                };
                if *lower < GrowthRate::zero() {
                    return Err("surface factor bound must be at least 0".into());
                }
                self.surface = Some(lower.clone());
            }
        }
        if self.lower > self.upper {
            return Err(format!("bounds crossed: {} > {}", self.lower, self.upper));
        }
        self.seen.push(step.rule);
        Ok(())
    }
}

/// Re-derives the bounds from the recorded steps alone and checks them
/// against the verdict.
pub fn replay(v: &Verdict) -> Result<ReplayOutcome, VerdictError> {
    let mut s = State {
        lower: GrowthRate::MinusInfinity,
        upper: GrowthRate::Infinity,
        group: GroupFact::Unknown,
        cotangent: None,
        surface: None,
        seen: Vec::new(),
    };
    for (step, st) in v.derivation.iter().enumerate() {
        s.apply(st).map_err(|reason| VerdictError::Replay {
            step,
            rule: st.rule,
            reason,
        })?;
    }
    let conclusion = Conclusion::from_bounds(&s.lower, &s.upper);
    if conclusion == Conclusion::Infinite
        && !(s.group == GroupFact::Nontrivial && [RuleId::R3, RuleId::R4].iter().all(|r| s.seen.contains(r)))
    {
        return Err(VerdictError::Mismatch {
            field: "derivation",
            replayed: format!("{:?}", s.seen),
            recorded: "an infinite conclusion without R2, R3 and R4 on a nontrivial group".into(),
        });
    }
    let out = ReplayOutcome {
        lower: s.lower,
        upper: s.upper,
        conclusion,
        group_fact: s.group,
    };
    let checks = [
        ("lower", out.lower.to_string(), v.lower.to_string()),
        ("upper", out.upper.to_string(), v.upper.to_string()),
        ("conclusion", format!("{:?}", out.conclusion), format!("{:?}", v.conclusion)),
        ("group_fact", format!("{:?}", out.group_fact), format!("{:?}", v.group_fact)),
    ];
    for (field, replayed, recorded) in checks {
        if replayed != recorded {
            return Err(VerdictError::Mismatch {
                field,
                replayed,
                recorded,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Budget, NontrivialityWitness};
    use crate::verdict::Bounds;

    fn verdict(lower: GrowthRate, upper: GrowthRate, group_fact: GroupFact, derivation: Vec<DerivationStep>) -> Verdict {
        Verdict {
            conclusion: Conclusion::from_bounds(&lower, &upper),
            lower,
            upper,
            group_fact,
            derivation,
        }
    }

    fn np() -> Fact {
        Fact::NpConstruction { half_dim: 8 }
    }

    fn witness() -> Fact {
        Fact::GroupNontrivial {
            witness: NontrivialityWitness::FiniteOrder { order: 120 },
        }
    }

    #[test]
    fn finite_chain() {
        let v = verdict(
            GrowthRate::zero(),
            GrowthRate::integer(8),
            GroupFact::Trivial,
            vec![
                DerivationStep::new(RuleId::R1, vec![np()]),
                DerivationStep::new(RuleId::R2, vec![np(), Fact::GroupTrivial]),
                DerivationStep::new(RuleId::R6, vec![Fact::AffineModel { complex_dim: 8 }]),
            ],
        );
        assert_eq!(replay(&v).unwrap().conclusion, Conclusion::Finite);
        let mut wrong = v.clone();
        wrong.upper = GrowthRate::integer(7);
        assert!(matches!(replay(&wrong), Err(VerdictError::Mismatch { field: "upper", .. })));
    }

    #[test]
    fn infinite_needs_the_proof_path() {
        let steps = vec![
            DerivationStep::new(RuleId::R2, vec![np(), witness()]),
            DerivationStep::new(RuleId::R3, vec![witness(), Fact::TripleFreeProduct { factors: 3 }]),
            DerivationStep::new(RuleId::R9, vec![Fact::SurfaceFactor { lower: GrowthRate::zero() }]),
            DerivationStep::new(RuleId::R4, vec![]),
        ];
        let v = verdict(GrowthRate::Infinity, GrowthRate::Infinity, GroupFact::Nontrivial, steps.clone());
        assert!(replay(&v).is_ok());
        let short = verdict(GrowthRate::Infinity, GrowthRate::Infinity, GroupFact::Nontrivial, steps[..1].to_vec());
        assert!(matches!(replay(&short), Err(VerdictError::Mismatch { field: "derivation", .. })));
    }

    #[test]
    fn contradictions_are_caught() {
        let v = verdict(
            GrowthRate::Infinity,
            GrowthRate::integer(8),
            GroupFact::Nontrivial,
            vec![
                DerivationStep::new(RuleId::R2, vec![np(), witness()]),
                DerivationStep::new(RuleId::R6, vec![Fact::AffineModel { complex_dim: 8 }]),
            ],
        );
        assert!(matches!(replay(&v), Err(VerdictError::Replay { step: 1, rule: RuleId::R6, .. })));
        let r4_first = verdict(
            GrowthRate::MinusInfinity,
            GrowthRate::Infinity,
            GroupFact::Unknown,
            vec![DerivationStep::new(RuleId::R4, vec![])],
        );
        assert!(replay(&r4_first).is_err());
        let critical = Fact::SubcriticalAttachment {
            index: 4,
            half_dim: 4,
            before: Bounds { lower: GrowthRate::zero(), upper: GrowthRate::zero() },
        };
        let v = verdict(GrowthRate::zero(), GrowthRate::zero(), GroupFact::Unknown, vec![DerivationStep::new(RuleId::R5, vec![critical])]);
        assert!(replay(&v).is_err());
    }

    #[test]
    fn union_and_sphere_rules() {
        let union = Fact::DisjointUnion {
            components: vec![
                Bounds { lower: GrowthRate::integer(2), upper: GrowthRate::Infinity },
                Bounds { lower: GrowthRate::MinusInfinity, upper: GrowthRate::integer(3) },
            ],
        };
        let v = verdict(
            GrowthRate::integer(2),
            GrowthRate::Infinity,
            GroupFact::Unknown,
            vec![DerivationStep::new(RuleId::R8, vec![union])],
        );
        assert_eq!(replay(&v).unwrap().conclusion, Conclusion::Interval);
        let sphere = verdict(
            GrowthRate::MinusInfinity,
            GrowthRate::MinusInfinity,
            GroupFact::Unknown,
            vec![DerivationStep::new(RuleId::R7, vec![Fact::StandardSphereFilling])],
        );
        assert_eq!(replay(&sphere).unwrap().conclusion, Conclusion::Finite);
        let undecided = Fact::GroupUndecided { max_cosets: Budget::default().max_cosets, max_degree: 5 };
        let v = verdict(
            GrowthRate::zero(),
            GrowthRate::Infinity,
            GroupFact::Unknown,
            vec![DerivationStep::new(RuleId::R1, vec![np()]), DerivationStep::new(RuleId::R2, vec![np(), undecided])],
        );
        assert_eq!(replay(&v).unwrap().conclusion, Conclusion::Unknown);
    }
}
