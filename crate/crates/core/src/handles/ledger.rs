use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::framing::HatDescriptor;
use super::HandleError;
use crate::exactalg::{homology, ChainComplex, HomologySummary, IntegerMatrix};
use crate::fds::GrowthRate;
use crate::groups::{exponent_matrix, free_product, Presentation, Word};

/// A cell attached along a sphere in the boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handle {
    pub index: usize,
    /// Coefficients on the existing `(index - 1)`-cells.
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub boundary: Vec<BigInt>,
    /// Attaching loop in the 1-handle generators; exactly for 2-handles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<Word>,
    pub label: String,
    pub ambient_half_dim: usize,
}

impl Handle {
    pub fn new(index: usize, boundary: Vec<BigInt>, label: impl Into<String>, ambient_half_dim: usize) -> Self {
        Self {
            index,
            boundary,
            word: None,
            label: label.into(),
            ambient_half_dim,
        }
    }

    /// A 2-handle whose boundary is read off the word's exponent sums.
    pub fn two_handle(word: Word, generators: usize, label: impl Into<String>, ambient_half_dim: usize) -> Self {
        let boundary = word.exponent_sums(generators).into_iter().map(BigInt::from).collect();
        Self {
            index: 2,
            boundary,
            word: Some(word),
            label: label.into(),
            ambient_half_dim,
        }
    }

    /// A handle attached along the sphere of a HAT.
    pub fn from_hat(hat: &HatDescriptor, label: impl Into<String>, ambient_half_dim: usize) -> Self {
        Self::new(hat.sphere_dim + 1, hat.homology_target.clone(), label, ambient_half_dim)
    }

    pub fn is_subcritical(&self) -> bool {
        self.index < self.ambient_half_dim
    }
}

/// One step of a ledger's construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum LedgerEvent {
    PresentationComplex {
        generators: usize,
        relators: usize,
    },
    Handle {
        index: usize,
        label: String,
        subcritical: bool,
    },
    /// Boundary model of the presentation; `H_2(G) = 0` is the caller's assertion.
    BoundaryModel {
        sphere_degree: usize,
        h2_asserted_zero: bool,
        dimension_bound_met: bool,
    },
    KillGenerators {
        handles: usize,
    },
    KillSecondHomology {
        handles: usize,
    },
    /// Product with a contractible affine surface of nonvanishing symplectic
    /// homology, whose growth rate is at least `growth_lower_bound`.
    ProductWithSurface {
        half_dim: usize,
        growth_lower_bound: GrowthRate,
    },
    KillSphere {
        index: usize,
        subcritical: bool,
    },
    TripleFreeProduct {
        factor: Presentation,
    },
    /// Complex dimension of the affine model available when the group is trivial.
    AffineModel {
        complex_dim: usize,
    },
    EndConnectSum {
        left_generators: usize,
        right_generators: usize,
    },
}

/// Homotopy-invariant shadow of a handle decomposition.
///
/// `pi1` presents the fundamental group of the current cell complex;
/// `core_pi1` keeps the group fed into the construction before any
/// generators were killed. Every 2-cell is a relator, in order, and column
/// `j` of `d_2` holds the exponent sums of relator `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LedgerWire", into = "LedgerWire")]
pub struct HomotopyLedger {
    half_dim: usize,
    pi1: Presentation,
    core_pi1: Presentation,
    chain: ChainComplex,
    homology: HomologySummary,
    history: Vec<LedgerEvent>,
}

#[derive(Serialize, Deserialize)]
struct LedgerWire {
    half_dim: usize,
    pi1: Presentation,
    #[serde(default)]
    core_pi1: Option<Presentation>,
    chain: ChainComplex,
    #[serde(default)]
    homology: Option<HomologySummary>,
    #[serde(default)]
    history: Vec<LedgerEvent>,
}

impl From<HomotopyLedger> for LedgerWire {
    fn from(l: HomotopyLedger) -> Self {
        LedgerWire {
            half_dim: l.half_dim,
            pi1: l.pi1,
            core_pi1: Some(l.core_pi1),
            chain: l.chain,
            homology: Some(l.homology),
            history: l.history,
        }
    }
}

impl TryFrom<LedgerWire> for HomotopyLedger {
    type Error = HandleError;
    fn try_from(w: LedgerWire) -> Result<Self, Self::Error> {
        let core = w.core_pi1.unwrap_or_else(|| w.pi1.clone());
        let l = HomotopyLedger::new(w.half_dim, w.pi1, core, w.chain, w.history)?;
        if let Some(h) = w.homology {
            if h != l.homology {
                return Err(HandleError::InvalidLedger("stored homology differs from the chain complex".into()));
            }
        }
        Ok(l)
    }
}

impl HomotopyLedger {
    fn new(
        half_dim: usize,
        pi1: Presentation,
        core_pi1: Presentation,
        chain: ChainComplex,
        history: Vec<LedgerEvent>,
    ) -> Result<Self, HandleError> {
        if chain.rank(0) != 1 {
            return Err(HandleError::InvalidLedger(format!("{} 0-cells, expected one", chain.rank(0))));
        }
        if chain.rank(1) != pi1.generator_count() {
            return Err(HandleError::InvalidLedger(format!(
                "{} 1-cells but {} generators",
                chain.rank(1),
                pi1.generator_count()
            )));
        }
        let l = pi1.relators().len();
        if chain.rank(2) != l {
            return Err(HandleError::InvalidLedger(format!("{} 2-cells but {l} relators", chain.rank(2))));
        }
        if l > 0 && chain.boundary(2) != exponent_matrix(&pi1) {
            return Err(HandleError::InvalidLedger("d_2 disagrees with relator exponent sums".into()));
        }
        let homology = homology(&chain);
        Ok(Self {
            half_dim,
            pi1,
            core_pi1,
            chain,
            homology,
            history,
        })
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn pi1(&self) -> &Presentation {
        &self.pi1
    }

    pub fn core_pi1(&self) -> &Presentation {
        &self.core_pi1
    }

    pub fn chain(&self) -> &ChainComplex {
        &self.chain
    }

    pub fn homology(&self) -> &HomologySummary {
        &self.homology
    }

    pub fn history(&self) -> &[LedgerEvent] {
        &self.history
    }

    pub fn with_half_dim(&self, n: usize) -> Self {
        Self {
            half_dim: n,
            ..self.clone()
        }
    }

    pub(crate) fn with_event(mut self, e: LedgerEvent) -> Self {
        self.history.push(e);
        self
    }

    pub(crate) fn with_core(mut self, core: Presentation) -> Self {
        self.core_pi1 = core;
        self
    }

    /// A single 0-cell.
    pub fn point(half_dim: usize) -> Self {
        Self::new(
            half_dim,
            Presentation::trivial(),
            Presentation::trivial(),
            ChainComplex::point(),
            Vec::new(),
        )
        .expect("the point is a ledger")
    }
}

/// One 0-cell, a 1-cell per generator and a 2-cell per relator.
///
/// The half-dimension is 3, the least in which the 2-handles are
/// subcritical; rebind it with [`HomotopyLedger::with_half_dim`].
pub fn ledger_from_presentation_complex(p: &Presentation) -> HomotopyLedger {
    let k = p.generator_count();
    let d1 = IntegerMatrix::zeros(1, k);
    let mut ranks = vec![1, k];
    let mut boundaries = vec![d1];
    if !p.relators().is_empty() {
        ranks.push(p.relators().len());
        boundaries.push(exponent_matrix(p));
    }
    let chain = ChainComplex::new(ranks, boundaries).expect("presentation complexes have d_1 = 0");
    let event = LedgerEvent::PresentationComplex {
        generators: k,
        relators: p.relators().len(),
    };
    HomotopyLedger::new(3, p.clone(), p.clone(), chain, vec![event]).expect("consistent by construction")
}

/// Attaches one handle. The boundary must be a cycle; a 2-handle's word must
/// have exponent sums equal to its boundary.
pub fn attach_handle(l: &HomotopyLedger, h: &Handle) -> Result<HomotopyLedger, HandleError> {
    if h.ambient_half_dim != l.half_dim {
        return Err(HandleError::DimMismatch {
            ledger: l.half_dim,
            handle: h.ambient_half_dim,
        });
    }
    let k = h.index;
    if k == 0 {
        return Err(HandleError::ZeroHandle);
    }
    let below = l.chain.rank(k - 1);
    if h.boundary.len() != below {
        return Err(HandleError::BoundaryLength {
            expected: below,
            found: h.boundary.len(),
        });
    }
    let is_cycle = if k == 1 {
        // augmented: a loop's endpoints cancel
        h.boundary.iter().sum::<BigInt>().is_zero()
    } else {
        l.chain.is_cycle(k - 1, &h.boundary)?
    };
    if !is_cycle {
        return Err(HandleError::NotACycle { index: k });
    }
    let mut pi1 = l.pi1.clone();
    match (&h.word, k) {
        (None, 2) => return Err(HandleError::MissingWord),
        (Some(_), k) if k != 2 => return Err(HandleError::UnexpectedWord),
        (Some(w), _) => {
            let sums = if w.max_generator() <= pi1.generator_count() {
                w.exponent_sums(pi1.generator_count())
            } else {
                Vec::new()
            };
            if sums.iter().map(|&s| BigInt::from(s)).ne(h.boundary.iter().cloned()) {
                return Err(HandleError::WordBoundaryMismatch {
                    word: sums,
                    boundary: h.boundary.iter().map(ToString::to_string).collect(),
                });
            }
            pi1 = pi1.with_relators([w.clone()])?;
        }
        (None, 1) => pi1 = pi1.with_generators(1),
        (None, _) => {}
    }
    let chain = l.chain.attach_cells(k, std::slice::from_ref(&h.boundary))?;
    let mut history = l.history.clone();
    history.push(LedgerEvent::Handle {
        index: k,
        label: h.label.clone(),
        subcritical: h.is_subcritical(),
    });
    HomotopyLedger::new(l.half_dim, pi1, l.core_pi1.clone(), chain, history)
}

/// Joins two ledgers by a 1-handle and contracts it: the wedge of the two complexes.
pub fn end_connect_sum(l1: &HomotopyLedger, l2: &HomotopyLedger) -> Result<HomotopyLedger, HandleError> {
    if l1.half_dim != l2.half_dim {
        return Err(HandleError::DimMismatch {
            ledger: l1.half_dim,
            handle: l2.half_dim,
        });
    }
    let sum = l1.chain.direct_sum(&l2.chain);
    // identify the second 0-cell with the first
    let d1 = sum.boundary(1);
    let rows = d1.to_rows();
    let merged: Vec<BigInt> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a + b).collect();
    let mut new_rows = vec![merged];
    new_rows.extend(rows.into_iter().skip(2));
    let cols = d1.cols();
    let d1 = IntegerMatrix::new(1, cols, new_rows.into_iter().flatten().collect())?;
    let mut ranks = sum.ranks().to_vec();
    ranks[0] -= 1;
    let mut boundaries = sum.boundaries().to_vec();
    if let Some(first) = boundaries.first_mut() {
        *first = d1;
    }
    let chain = ChainComplex::new(ranks, boundaries)?;
    let mut history = l1.history.clone();
    history.extend(l2.history.iter().cloned());
    history.push(LedgerEvent::EndConnectSum {
        left_generators: l1.pi1.generator_count(),
        right_generators: l2.pi1.generator_count(),
    });
    HomotopyLedger::new(
        l1.half_dim,
        free_product(&l1.pi1, &l2.pi1),
        free_product(&l1.core_pi1, &l2.core_pi1),
        chain,
        history,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::HomologyGroup;

    fn pres(k: usize, rels: &[&str]) -> Presentation {
        Presentation::parse(k, rels).unwrap()
    }

    #[test]
    fn presentation_complexes() {
        assert!(ledger_from_presentation_complex(&Presentation::trivial()).homology().is_acyclic());
        let killed = ledger_from_presentation_complex(&pres(1, &["a"]));
        assert!(killed.homology().is_acyclic());
        let torus = ledger_from_presentation_complex(&pres(2, &["abAB"]));
        assert_eq!(torus.homology().get(1), HomologyGroup::free(2));
        assert_eq!(torus.homology().get(2), HomologyGroup::free(1));
    }

    #[test]
    fn killing_a_free_generator() {
        let l = ledger_from_presentation_complex(&Presentation::free(1));
        let h = Handle::two_handle(Word::generator(1), 1, "kill", 3);
        let l2 = attach_handle(&l, &h).unwrap();
        assert!(l2.homology().get(1).is_zero());
        assert_eq!(l2.pi1().relators().len(), 1);
        assert_eq!(l2.chain().euler_characteristic(), l.chain().euler_characteristic() + 1);
    }

    #[test]
    fn three_cell_kills_torus_class() {
        let l = ledger_from_presentation_complex(&pres(2, &["abAB"]));
        let h = Handle::new(3, vec![BigInt::from(1)], "cap", 3);
        let l2 = attach_handle(&l, &h).unwrap();
        assert!(l2.homology().get(2).is_zero());
        assert_eq!(l2.pi1(), l.pi1());
    }

    #[test]
    fn rejects_bad_handles() {
        let l = ledger_from_presentation_complex(&pres(1, &["aa"]));
        // d_2 = [2], so the 2-cell is not a cycle
        let h = Handle::new(3, vec![BigInt::from(1)], "bad", 3);
        assert_eq!(attach_handle(&l, &h), Err(HandleError::NotACycle { index: 3 }));
        let mut w = Handle::two_handle(Word::generator(1), 1, "w", 3);
        w.boundary = vec![BigInt::from(2)];
        assert!(matches!(attach_handle(&l, &w), Err(HandleError::WordBoundaryMismatch { .. })));
        let no_word = Handle::new(2, vec![BigInt::from(1)], "n", 3);
        assert_eq!(attach_handle(&l, &no_word), Err(HandleError::MissingWord));
        let wrong_dim = Handle::new(3, vec![BigInt::zero()], "d", 7);
        assert!(matches!(attach_handle(&l, &wrong_dim), Err(HandleError::DimMismatch { .. })));
        let short = Handle::new(2, vec![], "s", 3);
        assert!(matches!(attach_handle(&l, &short), Err(HandleError::BoundaryLength { .. })));
    }

    #[test]
    fn connect_sum_with_point() {
        let l = ledger_from_presentation_complex(&pres(2, &["abAB"]));
        let s = end_connect_sum(&l, &HomotopyLedger::point(3)).unwrap();
        assert_eq!(s.homology(), l.homology());
        assert_eq!(s.pi1(), l.pi1());
        let pp = end_connect_sum(&HomotopyLedger::point(3), &HomotopyLedger::point(3)).unwrap();
        assert!(pp.homology().is_acyclic());
    }

    #[test]
    fn connect_sum_of_cyclic_groups() {
        let l = ledger_from_presentation_complex(&Presentation::cyclic(2));
        let s = end_connect_sum(&l, &l).unwrap();
        assert_eq!(s.pi1(), &pres(2, &["aa", "bb"]));
        assert_eq!(s.homology().get(1).torsion.len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let l = ledger_from_presentation_complex(&pres(2, &["abAB"]));
        let s = serde_json::to_string(&l).unwrap();
        let back: HomotopyLedger = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        let tampered = s.replace("\"betti\":2", "\"betti\":3");
        assert!(serde_json::from_str::<HomotopyLedger>(&tampered).is_err());
    }
}
