use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{ConcreteFds, FdsError, FdsMorphism};
use crate::exactalg::ExactMatrix;

/// Three systems on a shared grid joined by an exact triangle
/// `V --a12--> V' --a23--> V'' --a31--> V` at every grid point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTriangle {
    pub v: ConcreteFds,
    pub w: ConcreteFds,
    pub u: ConcreteFds,
    pub a12: Vec<ExactMatrix>,
    pub a23: Vec<ExactMatrix>,
    pub a31: Vec<ExactMatrix>,
    /// Shift after which every structure map of `u` vanishes.
    #[serde(with = "crate::serde_util::rational")]
    pub c: BigRational,
}

impl ExactTriangle {
    fn check_shapes(&self) -> Result<(), FdsError> {
        let g = self.v.grid();
        if self.w.grid() != g || self.u.grid() != g {
            return Err(FdsError::GridMismatch("triangle systems must share a grid".into()));
        }
        let n = g.len();
        if self.a12.len() != n || self.a23.len() != n || self.a31.len() != n {
            return Err(FdsError::GridMismatch("one map per grid point is required".into()));
        }
        if self.c < BigRational::one() {
            return Err(FdsError::PreconditionFailed(format!("C = {} < 1", self.c)));
        }
        for k in 0..n {
            let (dv, dw, du) = (self.v.dims()[k], self.w.dims()[k], self.u.dims()[k]);
            if self.a12[k].shape() != (dw, dv) || self.a23[k].shape() != (du, dw) || self.a31[k].shape() != (dv, du) {
                return Err(FdsError::GridMismatch(format!("triangle maps at point {k} have wrong shapes")));
            }
        }
        Ok(())
    }

    /// Exactness at all three corners of every grid point.
    pub fn check_exact(&self) -> Result<(), FdsError> {
        self.check_shapes()?;
        for k in 0..self.v.len() {
            let corners = [
                (&self.a31[k], &self.a12[k], self.v.dims()[k], "V"),
                (&self.a12[k], &self.a23[k], self.w.dims()[k], "V'"),
                (&self.a23[k], &self.a31[k], self.u.dims()[k], "V''"),
            ];
            for (into, out, dim, name) in corners {
                // im(into) = ker(out): composite zero and ranks complementary
                let zero = out.mul(into)?.is_zero();
                if !zero || into.rank() + out.rank() != dim {
                    return Err(FdsError::NotExact(format!("at {name}, grid point {k}")));
                }
            }
        }
        Ok(())
    }

    pub fn check_commuting(&self) -> Result<(), FdsError> {
        self.check_shapes()?;
        let sides = [
            (&self.a12, &self.v, &self.w, "a12"),
            (&self.a23, &self.w, &self.u, "a23"),
            (&self.a31, &self.u, &self.v, "a31"),
        ];
        for (maps, src, tgt, name) in sides {
            for k in 1..src.len() {
                let l = maps[k].mul(&src.steps()[k - 1])?;
                let r = tgt.steps()[k - 1].mul(&maps[k - 1])?;
                if l != r {
                    return Err(FdsError::NotCommuting(format!("{name} between points {} and {k}", k - 1)));
                }
            }
        }
        Ok(())
    }

    /// `ψ''_{x, Cx} = 0` at every grid point where `Cx` resolves. Between grid
    /// points the map factors through one of these, so this is exhaustive.
    pub fn check_u_tail(&self) -> Result<(), FdsError> {
        for (k, x) in self.u.grid().iter().enumerate() {
            if let Some(j) = self.u.resolve(&(x * &self.c)) {
                if !self.u.transition(k, j)?.is_zero() {
                    return Err(FdsError::UTailNotTrivial(k));
                }
            }
        }
        Ok(())
    }

    fn idx(&self, y: &BigRational) -> Option<usize> {
        self.v.resolve(y)
    }
}

/// Builds `φ = a12` (shift 1) and its inverse up to shift `φ'` (shift `C²`):
/// `φ'_x(q) = ψ_{Cx, C²x}(p)` for any `p` with `a12^{Cx}(p) = ψ'_{x, Cx}(q)`.
pub fn les_collapse_isomorphism(t: &ExactTriangle) -> Result<(FdsMorphism, FdsMorphism), FdsError> {
    t.check_exact()?;
    t.check_commuting()?;
    t.check_u_tail()?;
    let phi = FdsMorphism::new(BigRational::one(), t.a12.clone())?;

    let c2 = &t.c * &t.c;
    let mut back = Vec::new();
    for (k, x) in t.w.grid().iter().enumerate() {
        let (Some(j), Some(l)) = (t.idx(&(x * &t.c)), t.idx(&(x * &c2))) else { break };
        let target = t.w.transition(k, j)?;
        let p = t.a12[j].solve(&target)?.ok_or(FdsError::NoSolution(k))?;
        back.push(t.v.transition(j, l)?.mul(&p)?);
    }
    let phi_back = FdsMorphism::new(c2, back)?;
    Ok((phi, phi_back))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;
    use crate::fds::{int_grid, verify_isomorphism};
    use num_bigint::BigInt;

    #[test]
    fn trivial_third_system() {
        let g = int_grid(&[1, 2, 3, 4, 5, 6]);
        let v = ConcreteFds::from_rank_table(Field::F2, g.clone(), &[1, 1, 2, 2, 3, 3]).unwrap();
        let u = ConcreteFds::constant(Field::F2, g.clone(), 0, false).unwrap();
        let n = g.len();
        let t = ExactTriangle {
            v: v.clone(),
            w: v.clone(),
            u,
            a12: v.dims().iter().map(|&d| ExactMatrix::identity(Field::F2, d)).collect(),
            a23: v.dims().iter().map(|&d| ExactMatrix::zeros(Field::F2, 0, d)).collect(),
            a31: v.dims().iter().map(|&d| ExactMatrix::zeros(Field::F2, d, 0)).collect(),
            c: BigRational::from_integer(BigInt::from(2)),
        };
        let (phi, back) = les_collapse_isomorphism(&t).unwrap();
        assert_eq!(phi.maps.len(), n);
        assert!(!back.maps.is_empty());
        assert!(verify_isomorphism(&t.v, &t.w, &phi, &back).unwrap());
    }

    #[test]
    fn non_exact_rejected() {
        let g = int_grid(&[1, 2, 3]);
        let z = ConcreteFds::constant(Field::F2, g.clone(), 0, false).unwrap();
        let u = ConcreteFds::constant(Field::F2, g, 1, false).unwrap();
        let t = ExactTriangle {
            v: z.clone(),
            w: z,
            u,
            a12: vec![ExactMatrix::zeros(Field::F2, 0, 0); 3],
            a23: vec![ExactMatrix::zeros(Field::F2, 1, 0); 3],
            a31: vec![ExactMatrix::zeros(Field::F2, 0, 1); 3],
            c: BigRational::from_integer(BigInt::from(1)),
        };
        // 0 -> 0 -> F -> 0 is not exact at V''
        assert!(matches!(les_collapse_isomorphism(&t), Err(FdsError::NotExact(_))));
    }

    #[test]
    fn identity_u_violates_tail() {
        // 0 -> F -> F -> 0 with a23 the identity and u constant
        let g = int_grid(&[1, 2, 3]);
        let z = ConcreteFds::constant(Field::F2, g.clone(), 0, false).unwrap();
        let line = ConcreteFds::constant(Field::F2, g, 1, false).unwrap();
        let t = ExactTriangle {
            v: z,
            w: line.clone(),
            u: line,
            a12: vec![ExactMatrix::zeros(Field::F2, 1, 0); 3],
            a23: vec![ExactMatrix::identity(Field::F2, 1); 3],
            a31: vec![ExactMatrix::zeros(Field::F2, 0, 1); 3],
            c: BigRational::from_integer(BigInt::from(1)),
        };
        assert!(matches!(les_collapse_isomorphism(&t), Err(FdsError::UTailNotTrivial(0))));
    }
}
