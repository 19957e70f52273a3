use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{bigger_than_report, BiggerReport, ConcreteFds, FdsError};
use crate::exactalg::{ExactMatrix, Field};

/// Complex with a filtration given by an adapted basis: basis vector `e_k`
/// lies in `F_i` exactly when `levels[k] <= i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredComplex {
    pub differential: ExactMatrix,
    pub levels: Vec<usize>,
}

impl FilteredComplex {
    pub fn dim(&self) -> usize {
        self.levels.len()
    }

    pub fn max_level(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    fn basis_at(&self, pred: impl Fn(usize) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&k| pred(self.levels[k])).collect()
    }
}

/// One filtered complex per grid point, joined by filtered chain maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationFamily {
    pub field: Field,
    #[serde(with = "crate::serde_util::rational_vec")]
    pub grid: Vec<BigRational>,
    pub complexes: Vec<FilteredComplex>,
    pub steps: Vec<ExactMatrix>,
    #[serde(default)]
    pub stabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub holds: bool,
    /// `M * N`; the graded system is checked against homology with constants
    /// `(κ⁴, κ², κ²)`.
    #[serde(with = "crate::serde_util::rational")]
    pub kappa: BigRational,
    pub dominance: BiggerReport,
    /// The truncated subsystem `F_{⌊λ/M⌋}` compared at constants `(1, 1, 1)`.
    pub truncated: Option<BiggerReport>,
}

/// Homology of each complex in a family with the maps induced by `steps`.
///
/// Classes are represented by cycles completing a basis of the boundaries;
/// the induced map is read off by solving in the target's `[boundaries | reps]`.
pub fn homology_system(
    field: Field,
    grid: Vec<BigRational>,
    differentials: &[ExactMatrix],
    steps: &[ExactMatrix],
    stabilized: bool,
) -> Result<ConcreteFds, FdsError> {
    let mut frames = Vec::with_capacity(differentials.len());
    for d in differentials {
        frames.push(homology_frame(d)?);
    }
    let dims: Vec<usize> = frames.iter().map(|f| f.reps).collect();
    let mut out = Vec::with_capacity(steps.len());
    for (k, s) in steps.iter().enumerate() {
        let (src, tgt) = (&frames[k], &frames[k + 1]);
        let reps = src.basis.select(&(0..src.basis.rows()).collect::<Vec<_>>(), &(src.bounds..src.basis.cols()).collect::<Vec<_>>());
        let image = s.mul(&reps)?;
        let coords = tgt
            .basis
            .solve(&image)?
            .ok_or_else(|| FdsError::HypothesisViolated(format!("step {k} is not a chain map")))?;
        let rows: Vec<usize> = (tgt.bounds..tgt.basis.cols()).collect();
        let cols: Vec<usize> = (0..coords.cols()).collect();
        out.push(coords.select(&rows, &cols));
    }
    ConcreteFds::new(field, grid, dims, out, stabilized)
}

struct Frame {
    basis: ExactMatrix,
    bounds: usize,
    reps: usize,
}

fn homology_frame(d: &ExactMatrix) -> Result<Frame, FdsError> {
    let bounds = d.image();
    let cycles = d.kernel();
    let stacked = bounds.hstack(&cycles)?;
    // pivot columns of [B | Z] give B followed by complementary cycles
    let piv = stacked.echelon().pivots;
    let rows: Vec<usize> = (0..d.rows()).collect();
    let basis = stacked.select(&rows, &piv);
    Ok(Frame {
        bounds: bounds.cols(),
        reps: basis.cols() - bounds.cols(),
        basis,
    })
}

impl FiltrationFamily {
    fn check_structure(&self) -> Result<(), FdsError> {
        let n = self.grid.len();
        if self.complexes.len() != n || self.steps.len() + 1 != n {
            return Err(FdsError::InvalidSystem("one complex per point and one step per gap".into()));
        }
        for (k, c) in self.complexes.iter().enumerate() {
            let d = &c.differential;
            if d.shape() != (c.dim(), c.dim()) {
                return Err(FdsError::InvalidSystem(format!("differential {k} is not square of size {}", c.dim())));
            }
            if !d.mul(d)?.is_zero() {
                return Err(FdsError::HypothesisViolated(format!("differential squares to nonzero at point {k}")));
            }
            if !respects(d, &c.levels, &c.levels) {
                return Err(FdsError::HypothesisViolated(format!("differential leaves the filtration at point {k}")));
            }
        }
        for (k, s) in self.steps.iter().enumerate() {
            let (a, b) = (&self.complexes[k], &self.complexes[k + 1]);
            if s.shape() != (b.dim(), a.dim()) {
                return Err(FdsError::InvalidSystem(format!("step {k} has the wrong shape")));
            }
            if s.mul(&a.differential)? != b.differential.mul(s)? {
                return Err(FdsError::HypothesisViolated(format!("step {k} is not a chain map")));
            }
            if !respects(s, &a.levels, &b.levels) {
                return Err(FdsError::HypothesisViolated(format!("step {k} leaves the filtration")));
            }
        }
        Ok(())
    }

    fn system(&self) -> Result<ConcreteFds, FdsError> {
        let dims = self.complexes.iter().map(FilteredComplex::dim).collect();
        ConcreteFds::new(self.field, self.grid.clone(), dims, self.steps.clone(), self.stabilized)
    }

    /// Homology system of the whole complexes.
    pub fn homology(&self) -> Result<ConcreteFds, FdsError> {
        let ds: Vec<ExactMatrix> = self.complexes.iter().map(|c| c.differential.clone()).collect();
        homology_system(self.field, self.grid.clone(), &ds, &self.steps, self.stabilized)
    }

    /// Homology of the `level`-th graded piece at every point.
    pub fn graded_homology(&self, level: usize) -> Result<ConcreteFds, FdsError> {
        graded_piece(self.field, &self.grid, &self.complexes, &self.steps, self.stabilized, |_, l| l == level)
    }

    /// Direct sum over all levels of graded homology.
    pub fn total_graded_homology(&self) -> Result<ConcreteFds, FdsError> {
        let top = self.complexes.iter().map(FilteredComplex::max_level).max().unwrap_or(0);
        let mut acc = self.graded_homology(0)?;
        for i in 1..=top {
            acc = super::direct_sum(&acc, &self.graded_homology(i)?)?;
        }
        Ok(acc)
    }
}

fn respects(m: &ExactMatrix, src_levels: &[usize], tgt_levels: &[usize]) -> bool {
    (0..m.rows()).all(|r| (0..m.cols()).all(|c| m.get(r, c).is_zero() || tgt_levels[r] <= src_levels[c]))
}

/// Subquotient complexes cut out by `keep(point, level)`, which must select a
/// set of levels closed under the differential's and steps' level drops.
fn graded_piece(
    field: Field,
    grid: &[BigRational],
    complexes: &[FilteredComplex],
    steps: &[ExactMatrix],
    stabilized: bool,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<ConcreteFds, FdsError> {
    let idx: Vec<Vec<usize>> = complexes
        .iter()
        .enumerate()
        .map(|(k, c)| c.basis_at(|l| keep(k, l)))
        .collect();
    let ds: Vec<ExactMatrix> = complexes
        .iter()
        .zip(&idx)
        .map(|(c, ix)| c.differential.select(ix, ix))
        .collect();
    let ss: Vec<ExactMatrix> = steps
        .iter()
        .enumerate()
        .map(|(k, s)| s.select(&idx[k + 1], &idx[k]))
        .collect();
    homology_system(field, grid.to_vec(), &ds, &ss, stabilized)
}

fn floor_to_usize(r: &BigRational) -> usize {
    let f: BigInt = r.numer().div_floor(r.denom());
    usize::try_from(f).unwrap_or(usize::MAX)
}

/// Verifies the hypotheses on the window and then that graded homology is
/// bigger than homology with the constants produced from `M` and `N`.
pub fn filtration_report(family: &FiltrationFamily, m: &BigRational, n: &BigRational) -> Result<FiltrationReport, FdsError> {
    let one = BigRational::one();
    if m <= &one || n <= &one {
        return Err(FdsError::PreconditionFailed("M and N must exceed 1".into()));
    }
    family.check_structure()?;
    let top = family.complexes.iter().map(FilteredComplex::max_level).max().unwrap_or(0);

    // graded maps must be isomorphisms from the first cell reaching M*i on
    for i in 0..=top {
        let g = family.graded_homology(i)?;
        let threshold = m * BigRational::from_integer(BigInt::from(i));
        for k in 0..g.steps().len() {
            if family.grid[k + 1] <= threshold {
                continue;
            }
            let s = &g.steps()[k];
            if s.rows() != s.cols() || s.rank() != s.rows() {
                return Err(FdsError::HypothesisViolated(format!(
                    "graded map at level {i} between points {k} and {} is not an isomorphism",
                    k + 1
                )));
            }
        }
    }
    // filtration must be exhausted by level ⌊N λ⌋
    for (k, c) in family.complexes.iter().enumerate() {
        let bound = floor_to_usize(&(n * &family.grid[k]));
        if c.max_level() > bound {
            return Err(FdsError::HypothesisViolated(format!(
                "level {} used at point {k}, beyond ⌊N x⌋ = {bound}",
                c.max_level()
            )));
        }
    }

    let kappa = m * n;
    let k2 = &kappa * &kappa;
    let k4 = &k2 * &k2;
    let graded = family.total_graded_homology()?;
    let homology = family.homology()?;
    let dominance = bigger_than_report(&graded, &homology, &k4, &k2, &k2)?;
    let truncated = truncated_check(family, m, top)?;
    Ok(FiltrationReport {
        holds: dominance.holds && truncated.as_ref().is_none_or(|r| r.holds),
        kappa,
        dominance,
        truncated,
    })
}

/// Builds `C'_λ = F^λ_{⌊λ/M⌋}` on the grid refined by the points `M i`, and
/// compares its graded homology with its homology at constants `(1, 1, 1)`.
fn truncated_check(family: &FiltrationFamily, m: &BigRational, top: usize) -> Result<Option<BiggerReport>, FdsError> {
    let base = family.system()?;
    let mut grid: Vec<BigRational> = family.grid.clone();
    grid.extend((1..=top + 1).map(|i| m * BigRational::from_integer(BigInt::from(i))));
    grid.retain(|x| base.resolve(x).is_some());
    grid.sort();
    grid.dedup();
    let idx: Vec<usize> = grid.iter().map(|x| base.resolve(x).expect("retained")).collect();
    let cut: Vec<usize> = grid.iter().map(|x| floor_to_usize(&(x / m))).collect();

    let complexes: Vec<FilteredComplex> = idx.iter().map(|&k| family.complexes[k].clone()).collect();
    let steps = idx
        .windows(2)
        .map(|w| base.transition(w[0], w[1]))
        .collect::<Result<Vec<_>, _>>()?;
    let stabilized = family.stabilized && top <= cut[cut.len() - 1];
    let sub = |p: usize, l: usize| l <= cut[p];
    let h_trunc = graded_piece(family.field, &grid, &complexes, &steps, stabilized, sub)?;
    let mut g_trunc: Option<ConcreteFds> = None;
    for i in 0..=top {
        let piece = graded_piece(family.field, &grid, &complexes, &steps, stabilized, |p, l| l == i && i <= cut[p])?;
        g_trunc = Some(match g_trunc {
            None => piece,
            Some(acc) => super::direct_sum(&acc, &piece)?,
        });
    }
    let one = BigRational::one();
    let g = g_trunc.expect("at least level 0");
    match bigger_than_report(&g, &h_trunc, &one, &one, &one) {
        Ok(r) => Ok(Some(r)),
        Err(FdsError::GridMismatch(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn filtration_dominance_check(family: &FiltrationFamily, m: &BigRational, n: &BigRational) -> Result<bool, FdsError> {
    Ok(filtration_report(family, m, n)?.holds)
}
