use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::system::inclusion;
use super::{ConcreteFds, FdsError};
use crate::exactalg::ExactMatrix;

/// Outcome of the rank-domination check between two windows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiggerReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub violation: Option<BiggerViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiggerViolation {
    #[serde(with = "crate::serde_util::rational")]
    pub x: BigRational,
    #[serde(with = "crate::serde_util::rational")]
    pub y: BigRational,
    pub left_rank: usize,
    pub right_rank: usize,
}

fn check_constants(a: &BigRational, b: &BigRational, c: &BigRational) -> Result<(), FdsError> {
    let one = BigRational::one();
    if a < &one || b < &one || c < &one || c < b {
        return Err(FdsError::PreconditionFailed(format!(
            "need A, B, C >= 1 and C >= B (got {a}, {b}, {c})"
        )));
    }
    Ok(())
}

/// Tests `rank ψ_{Bx, Cyx} >= rank ψ'_{x, Ayx}` for all `x, y >= 1` whose four
/// indices resolve. Both sides are step functions, so checking `x` at the
/// left ends of their pieces and `xy` at every breakpoint is exhaustive for
/// the window.
pub fn bigger_than_report(
    v: &ConcreteFds,
    w: &ConcreteFds,
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> Result<BiggerReport, FdsError> {
    check_constants(a, b, c)?;
    if v.field() != w.field() {
        return Err(FdsError::GridMismatch(format!("fields {} and {}", v.field(), w.field())));
    }
    let one = BigRational::one();
    let mut xs: Vec<BigRational> = std::iter::once(one.clone())
        .chain(w.grid().iter().cloned())
        .chain(v.grid().iter().map(|g| g / b))
        .filter(|x| x >= &one)
        .collect();
    xs.sort();
    xs.dedup();
    let breaks: Vec<BigRational> = v
        .grid()
        .iter()
        .map(|g| g / c)
        .chain(w.grid().iter().map(|g| g / a))
        .collect();

    let mut checked = 0;
    for x in &xs {
        let mut ts: Vec<BigRational> = breaks.iter().filter(|t| *t >= x).cloned().collect();
        ts.push(x.clone());
        ts.sort();
        ts.dedup();
        for t in ts {
            let left = v.rank_between(&(x * b), &(&t * c))?;
            let right = w.rank_between(x, &(&t * a))?;
            let (Some(l), Some(r)) = (left, right) else { continue };
            checked += 1;
            if l < r {
                return Ok(BiggerReport {
                    holds: false,
                    pairs_checked: checked,
                    violation: Some(BiggerViolation {
                        y: &t / x,
                        x: x.clone(),
                        left_rank: l,
                        right_rank: r,
                    }),
                });
            }
        }
    }
    if checked == 0 {
        return Err(FdsError::GridMismatch("no resolvable (x, y) pair".into()));
    }
    Ok(BiggerReport {
        holds: true,
        pairs_checked: checked,
        violation: None,
    })
}

pub fn bigger_than_check(
    v: &ConcreteFds,
    w: &ConcreteFds,
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> Result<bool, FdsError> {
    Ok(bigger_than_report(v, w, a, b, c)?.holds)
}

/// Realizes `Ṽ'_x = im ψ'_{x/B, (A/B)x}` (zero for `x < B`) as a concrete
/// system and confirms `dim Ṽ'_x <= dim V_x` wherever the domination check
/// reached.
pub fn bigger_than_rank_model(
    v: &ConcreteFds,
    w: &ConcreteFds,
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
) -> Result<ConcreteFds, FdsError> {
    if !bigger_than_check(v, w, a, b, c)? {
        return Err(FdsError::PreconditionFailed("v is not bigger than w on this window".into()));
    }
    let field = w.field();
    let one = BigRational::one();
    let mut grid: Vec<BigRational> = std::iter::once(one.clone())
        .chain(std::iter::once(b.clone()))
        .chain(v.grid().iter().cloned())
        .chain(w.grid().iter().map(|g| g * b))
        .chain(w.grid().iter().map(|g| g * b / a))
        .filter(|x| x >= &one)
        .filter(|x| x < b || (w.resolve(&(x / b)).is_some() && w.resolve(&(x * a / b)).is_some()))
        .collect();
    grid.sort();
    grid.dedup();
    if grid.is_empty() {
        return Err(FdsError::GridMismatch("empty model window".into()));
    }

    // image basis of ψ' at each point, as columns inside V'_{(A/B)x}
    let mut bases: Vec<Option<(usize, ExactMatrix)>> = Vec::with_capacity(grid.len());
    for x in &grid {
        if x < b {
            bases.push(None);
            continue;
        }
        let i = w.resolve(&(x / b)).expect("filtered above");
        let j = w.resolve(&(x * a / b)).expect("filtered above");
        bases.push(Some((j, w.transition(i, j)?.image())));
    }
    let dims: Vec<usize> = bases.iter().map(|o| o.as_ref().map_or(0, |(_, m)| m.cols())).collect();
    let mut steps = Vec::with_capacity(grid.len().saturating_sub(1));
    for k in 1..grid.len() {
        let step = match (&bases[k - 1], &bases[k]) {
            (Some((j0, b0)), Some((j1, b1))) => {
                let pushed = w.transition(*j0, *j1)?.mul(b0)?;
                b1.solve(&pushed)?
                    .ok_or_else(|| FdsError::PreconditionFailed("image not carried into image".into()))?
            }
            _ => inclusion(field, dims[k - 1], dims[k]),
        };
        steps.push(step);
    }
    let last = grid.last().expect("nonempty");
    let stabilized = w.is_stabilized() && last / b >= w.grid()[w.last()];
    let model = ConcreteFds::new(field, grid.clone(), dims.clone(), steps, stabilized)?;

    for (x, &d) in grid.iter().zip(&dims) {
        let (Some(k), Some(_)) = (v.resolve(x), v.resolve(&(x * c / b))) else { continue };
        if d > v.dims()[k] {
            return Err(FdsError::PreconditionFailed(format!(
                "model dimension {d} exceeds dim V = {} at x = {x}",
                v.dims()[k]
            )));
        }
    }
    Ok(model)
}
