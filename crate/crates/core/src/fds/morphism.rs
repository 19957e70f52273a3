use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{ConcreteFds, FdsError};
use crate::exactalg::ExactMatrix;

/// Morphism `V -> V'` with shift `C`: `maps[k]` sends `V_{x_k}` to `V'_{C x_k}`.
///
/// Maps are given on a prefix of the source grid. Between grid points the
/// morphism is extended by composing with structure maps of the target, so
/// `φ_y = ψ'_{C x_k, C y} ∘ φ_{x_k}` for `x_k <= y < x_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FdsMorphism {
    #[serde(with = "crate::serde_util::rational")]
    pub shift: BigRational,
    pub maps: Vec<ExactMatrix>,
}

impl FdsMorphism {
    pub fn new(shift: BigRational, maps: Vec<ExactMatrix>) -> Result<Self, FdsError> {
        if shift < BigRational::one() {
            return Err(FdsError::InvalidSystem(format!("shift {shift} < 1")));
        }
        Ok(Self { shift, maps })
    }

    pub fn identity(v: &ConcreteFds) -> Self {
        Self {
            shift: BigRational::one(),
            maps: v.dims().iter().map(|&d| ExactMatrix::identity(v.field(), d)).collect(),
        }
    }

    /// The structure maps `ψ_{x, Cx}` viewed as a morphism of `v` into itself.
    pub fn shift_of(v: &ConcreteFds, c: BigRational) -> Result<Self, FdsError> {
        let mut maps = Vec::new();
        for (k, x) in v.grid().iter().enumerate() {
            match v.resolve(&(x * &c)) {
                Some(j) => maps.push(v.transition(k, j)?),
                None => break,
            }
        }
        Self::new(c, maps)
    }

    /// `φ_y` as a matrix, or `None` where undefined or unresolvable.
    pub fn at(&self, v: &ConcreteFds, w: &ConcreteFds, y: &BigRational) -> Result<Option<ExactMatrix>, FdsError> {
        let Some(k) = v.resolve(y) else { return Ok(None) };
        if k >= self.maps.len() {
            return Ok(None);
        }
        let base = &v.grid()[k] * &self.shift;
        let Some(j0) = w.resolve(&base) else {
            return Err(FdsError::GridMismatch(format!("C x = {base} is outside the target window")));
        };
        let Some(j1) = w.resolve(&(y * &self.shift)) else { return Ok(None) };
        Ok(Some(w.transition(j0, j1)?.mul(&self.maps[k])?))
    }
}

fn check_shapes(v: &ConcreteFds, w: &ConcreteFds, phi: &FdsMorphism) -> Result<Vec<usize>, FdsError> {
    if v.field() != w.field() || phi.maps.iter().any(|m| m.field() != v.field()) {
        return Err(FdsError::GridMismatch("field mismatch".into()));
    }
    if phi.maps.len() > v.len() {
        return Err(FdsError::GridMismatch(format!(
            "{} maps for {} grid points",
            phi.maps.len(),
            v.len()
        )));
    }
    let mut targets = Vec::with_capacity(phi.maps.len());
    for (k, m) in phi.maps.iter().enumerate() {
        let cx = &v.grid()[k] * &phi.shift;
        let j = w
            .resolve(&cx)
            .ok_or_else(|| FdsError::GridMismatch(format!("C x_{k} = {cx} is outside the target window")))?;
        if m.shape() != (w.dims()[j], v.dims()[k]) {
            return Err(FdsError::GridMismatch(format!(
                "map {k} has shape {:?}, expected {:?}",
                m.shape(),
                (w.dims()[j], v.dims()[k])
            )));
        }
        targets.push(j);
    }
    Ok(targets)
}

/// Checks `a_{x_{k+1}} ∘ ψ_{x_k, x_{k+1}} = ψ'_{C x_k, C x_{k+1}} ∘ a_{x_k}` on
/// every consecutive pair. In the piecewise-constant model this covers all
/// pairs `x_1 <= x_2`.
pub fn verify_morphism(v: &ConcreteFds, w: &ConcreteFds, phi: &FdsMorphism) -> Result<bool, FdsError> {
    let targets = check_shapes(v, w, phi)?;
    for k in 1..phi.maps.len() {
        let left = phi.maps[k].mul(&v.steps()[k - 1])?;
        let right = w.transition(targets[k - 1], targets[k])?.mul(&phi.maps[k - 1])?;
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One side of an isomorphism check: `g ∘ f = ψ_{x, C_f C_g x}` wherever all
/// pieces are defined. Returns `(holds, points checked)`.
fn composite_is_shift(
    v: &ConcreteFds,
    w: &ConcreteFds,
    f: &FdsMorphism,
    g: &FdsMorphism,
) -> Result<(bool, usize), FdsError> {
    let total = &f.shift * &g.shift;
    let mut checked = 0;
    for k in 0..f.maps.len() {
        let x = &v.grid()[k];
        let Some(end) = v.resolve(&(x * &total)) else { continue };
        let Some(gy) = g.at(w, v, &(x * &f.shift))? else { continue };
        let composite = gy.mul(&f.maps[k])?;
        if composite != v.transition(k, end)? {
            return Ok((false, checked + 1));
        }
        checked += 1;
    }
    Ok((true, checked))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismReport {
    pub holds: bool,
    pub forward_morphism: bool,
    pub backward_morphism: bool,
    pub points_checked: usize,
}

pub fn isomorphism_report(
    v: &ConcreteFds,
    w: &ConcreteFds,
    phi: &FdsMorphism,
    phi_back: &FdsMorphism,
) -> Result<IsomorphismReport, FdsError> {
    let forward_morphism = verify_morphism(v, w, phi)?;
    let backward_morphism = verify_morphism(w, v, phi_back)?;
    let (a, n1) = composite_is_shift(v, w, phi, phi_back)?;
    let (b, n2) = composite_is_shift(w, v, phi_back, phi)?;
    Ok(IsomorphismReport {
        holds: forward_morphism && backward_morphism && a && b,
        forward_morphism,
        backward_morphism,
        points_checked: n1 + n2,
    })
}

/// `φ' ∘ φ` and `φ ∘ φ'` are the structure maps with the combined shift, at
/// every grid point where both sides are defined.
pub fn verify_isomorphism(
    v: &ConcreteFds,
    w: &ConcreteFds,
    phi: &FdsMorphism,
    phi_back: &FdsMorphism,
) -> Result<bool, FdsError> {
    Ok(isomorphism_report(v, w, phi, phi_back)?.holds)
}
