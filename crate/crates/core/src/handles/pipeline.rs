use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::ledger::{attach_handle, ledger_from_presentation_complex, Handle, HomotopyLedger, LedgerEvent};
use super::HandleError;
use crate::exactalg::{homology_generators, integer_kernel};
use crate::fds::GrowthRate;
use crate::groups::{
    abelianization, free_product_all, triviality_semidecide, Budget, NontrivialityWitness, Presentation, TrivialityOutcome,
    Word,
};

/// Smallest final half-dimension at which the geometric statements behind
/// the construction are available; recorded, not enforced.
const DIMENSION_BOUND: usize = 8;

fn sphere_degree(l: &HomotopyLedger) -> Result<usize, HandleError> {
    l.homology()
        .sphere_degree()
        .ok_or_else(|| HandleError::PatternMismatch(format!("expected H_0 = H_d = Z only, found {}", l.homology())))
}

/// A cell model of a homology sphere with fundamental group `G_P`, for a
/// presentation with `H_1 = 0` whose `H_2 = 0` is asserted by the caller.
///
/// Presentation complex, then 3-cells along a Z-basis of `ker d_2`, then one
/// cell of dimension `n - 2` with zero boundary. The ledger's half-dimension
/// is `n - 2`, that of the cotangent disc bundle of the sphere model, so the
/// later product with a surface brings it to `n`.
pub fn synth_boundary_model(p: &Presentation, n: usize) -> Result<HomotopyLedger, HandleError> {
    let h1 = abelianization(p);
    if !h1.is_zero() {
        return Err(HandleError::H1Nonzero(h1));
    }
    if n < 5 {
        return Err(HandleError::HalfDimTooSmall(n));
    }
    let half = n - 2;
    let mut l = ledger_from_presentation_complex(p).with_half_dim(half);
    let kernel = integer_kernel(&l.chain().boundary(2));
    for j in 0..kernel.cols() {
        let h = Handle::new(3, kernel.column(j), format!("h2_basis_{j}"), half);
        l = attach_handle(&l, &h)?;
    }
    let sphere = Handle::new(n - 2, vec![BigInt::from(0); l.chain().rank(n - 3)], "sphere", half);
    let l = attach_handle(&l, &sphere)?.with_event(LedgerEvent::BoundaryModel {
        sphere_degree: n - 2,
        h2_asserted_zero: true,
        dimension_bound_met: n >= DIMENSION_BOUND,
    });
    sphere_degree(&l)?;
    Ok(l)
}

/// Kills every generator with a 2-handle, then the resulting `H_2` with 3-handles.
pub fn build_n2(l: &HomotopyLedger) -> Result<HomotopyLedger, HandleError> {
    let d = sphere_degree(l)?;
    let k = l.pi1().generator_count();
    let half = l.half_dim();
    let mut out = l.clone();
    for g in 1..=k {
        let h = Handle::two_handle(Word::generator(g), k, format!("kill_g{g}"), half);
        out = attach_handle(&out, &h)?;
    }
    out = out.with_event(LedgerEvent::KillGenerators { handles: k });
    let basis = homology_generators(out.chain(), 2)?;
    if !basis.torsion.is_empty() {
        return Err(HandleError::PatternMismatch("torsion in H_2 after killing generators".into()));
    }
    let cells = basis.free.len();
    for (j, cycle) in basis.free.into_iter().enumerate() {
        out = attach_handle(&out, &Handle::new(3, cycle, format!("kill_h2_{j}"), half))?;
    }
    out = out.with_event(LedgerEvent::KillSecondHomology { handles: cells });
    if sphere_degree(&out)? != d {
        return Err(HandleError::PatternMismatch(format!("sphere class moved from degree {d}")));
    }
    Ok(out)
}

/// Product with a contractible affine surface: homotopy type unchanged,
/// half-dimension up by two, and a growth contribution of at least zero.
pub fn product_with_t(l: &HomotopyLedger) -> HomotopyLedger {
    let half = l.half_dim() + 2;
    l.with_half_dim(half).with_event(LedgerEvent::ProductWithSurface {
        half_dim: half,
        growth_lower_bound: GrowthRate::zero(),
    })
}

/// Attaches a handle along the generator of the one remaining nonzero
/// reduced homology group.
pub fn build_n4(l: &HomotopyLedger) -> Result<HomotopyLedger, HandleError> {
    let d = sphere_degree(l)?;
    let basis = homology_generators(l.chain(), d)?;
    let [cycle] = basis.free.as_slice() else {
        return Err(HandleError::PatternMismatch(format!("H_{d} has {} free generators", basis.free.len())));
    };
    let h = Handle::new(d + 1, cycle.clone(), "kill_sphere", l.half_dim());
    let subcritical = h.is_subcritical();
    let out = attach_handle(l, &h)?.with_event(LedgerEvent::KillSphere {
        index: d + 1,
        subcritical,
    });
    if !out.homology().is_acyclic() {
        return Err(HandleError::PatternMismatch(format!("not acyclic: {}", out.homology())));
    }
    Ok(out)
}

/// The full pipeline on `P * P * P` with final half-dimension `n`.
pub fn build_np(p: &Presentation, n: usize) -> Result<HomotopyLedger, HandleError> {
    let ppp = free_product_all(&[p.clone(), p.clone(), p.clone()]);
    let model = synth_boundary_model(&ppp, n)?
        .with_core(ppp)
        .with_event(LedgerEvent::TripleFreeProduct { factor: p.clone() });
    let l = build_n4(&product_with_t(&build_n2(&model)?))?;
    Ok(l.with_event(LedgerEvent::AffineModel { complex_dim: n }))
}

/// Outcome of the contractibility check. `Pi1Unknown` is an honest answer:
/// triviality of a presented group is only semidecidable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ContractibilityOutcome {
    Certified,
    HomologyObstruction { degree: usize },
    Pi1Nontrivial { witness: NontrivialityWitness },
    Pi1Unknown,
}

/// Acyclic and simply connected, hence contractible.
pub fn verify_contractible(l: &HomotopyLedger, budget: Budget) -> Result<ContractibilityOutcome, HandleError> {
    let h = l.homology();
    if !h.get(0).is_z() {
        return Ok(ContractibilityOutcome::HomologyObstruction { degree: 0 });
    }
    if let Some(&degree) = h.support().iter().find(|&&d| d > 0) {
        return Ok(ContractibilityOutcome::HomologyObstruction { degree });
    }
    Ok(match triviality_semidecide(l.pi1(), budget)? {
        TrivialityOutcome::Trivial => ContractibilityOutcome::Certified,
        TrivialityOutcome::Nontrivial { witness } => ContractibilityOutcome::Pi1Nontrivial { witness },
        TrivialityOutcome::Unknown => ContractibilityOutcome::Pi1Unknown,
    })
}

/// Triviality of the group the construction started from, which survives
/// in the boundary even after the interior has been made contractible.
pub fn core_group_status(l: &HomotopyLedger, budget: Budget) -> Result<TrivialityOutcome, HandleError> {
    Ok(triviality_semidecide(l.core_pi1(), budget)?)
}
