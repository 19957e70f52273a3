use std::fmt;

use serde::{Deserialize, Serialize};

/// Rendered with every report built from these rules.
pub const DISCLAIMER: &str = "Growth-rate rules are trusted statements about symplectic cohomology; \
only the group-theoretic and cellular facts they consume are computed.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleStatus {
    /// Imported from the literature and not checked here.
    ConditionalOnPaper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub id: RuleId,
    pub statement: &'static str,
    pub status: RuleStatus,
}

const fn r(id: RuleId, statement: &'static str) -> Rule {
    Rule {
        id,
        statement,
        status: RuleStatus::ConditionalOnPaper,
    }
}

const RULES: [Rule; 9] = [
    r(RuleId::R1, "Gamma(N_P) >= 0"),
    r(RuleId::R2, "Gamma(N_P) < inf <=> G_P = 1"),
    r(RuleId::R3, "Gamma(D*Q) >= Gamma_conj(pi_1(Q))"),
    r(RuleId::R4, "Gamma(M x M') = Gamma(M) + Gamma(M')"),
    r(RuleId::R5, "M' = M + subcritical handle => Gamma(M') = Gamma(M)"),
    r(RuleId::R6, "M = affine variety A => Gamma(M) <= dim_C A"),
    r(RuleId::R7, "boundary of M fillable by the standard ball => Gamma(M) = -inf"),
    r(RuleId::R8, "Gamma(M u M') = max(Gamma(M), Gamma(M'))"),
    r(RuleId::R9, "SH(T) != 0 => Gamma(T) >= 0"),
];

pub fn rules() -> &'static [Rule] {
    &RULES
}

pub fn rule(id: RuleId) -> &'static Rule {
    &RULES[id as usize]
}
