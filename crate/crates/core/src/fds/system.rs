use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::FdsError;
use crate::exactalg::{ExactMatrix, Field};

/// Finite window of a filtered directed system over a rational grid.
///
/// The system is piecewise constant: `V_y = V_{x_j}` for the largest grid
/// point `x_j <= y`, and the structure map between two such points is the
/// composite of the intervening steps. When `stabilized` is set the system is
/// constant with identity maps past the last grid point.
///
/// Grid indices are zero-based throughout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FdsWire", into = "FdsWire")]
pub struct ConcreteFds {
    field: Field,
    grid: Vec<BigRational>,
    dims: Vec<usize>,
    steps: Vec<ExactMatrix>,
    stabilized: bool,
}

impl ConcreteFds {
    pub fn new(
        field: Field,
        grid: Vec<BigRational>,
        dims: Vec<usize>,
        steps: Vec<ExactMatrix>,
        stabilized: bool,
    ) -> Result<Self, FdsError> {
        check_grid(&grid)?;
        if dims.len() != grid.len() {
            return Err(FdsError::InvalidSystem(format!(
                "{} grid points but {} dimensions",
                grid.len(),
                dims.len()
            )));
        }
        if steps.len() + 1 != grid.len() {
            return Err(FdsError::InvalidSystem(format!(
                "{} grid points need {} steps, found {}",
                grid.len(),
                grid.len() - 1,
                steps.len()
            )));
        }
        for (i, s) in steps.iter().enumerate() {
            if s.field() != field {
                return Err(FdsError::InvalidSystem(format!("step {i} is over {}, not {field}", s.field())));
            }
            if s.shape() != (dims[i + 1], dims[i]) {
                return Err(FdsError::InvalidSystem(format!(
                    "step {i} has shape {:?}, expected {:?}",
                    s.shape(),
                    (dims[i + 1], dims[i])
                )));
            }
        }
        Ok(Self {
            field,
            grid,
            dims,
            steps,
            stabilized,
        })
    }

    /// Constant system of dimension `dim` with identity steps.
    pub fn constant(field: Field, grid: Vec<BigRational>, dim: usize, stabilized: bool) -> Result<Self, FdsError> {
        let steps = (1..grid.len()).map(|_| ExactMatrix::identity(field, dim)).collect();
        let dims = vec![dim; grid.len()];
        Self::new(field, grid, dims, steps, stabilized)
    }

    /// Stabilized system whose colimit ranks are exactly `ranks`, realized by
    /// coordinate inclusions. `ranks` must be non-decreasing, as every colimit
    /// rank table is.
    pub fn from_rank_table(field: Field, grid: Vec<BigRational>, ranks: &[usize]) -> Result<Self, FdsError> {
        if ranks.len() != grid.len() {
            return Err(FdsError::InvalidSystem("rank table length differs from grid".into()));
        }
        if ranks.windows(2).any(|w| w[0] > w[1]) {
            return Err(FdsError::InvalidSystem("colimit rank tables are non-decreasing".into()));
        }
        let steps = ranks
            .windows(2)
            .map(|w| inclusion(field, w[0], w[1]))
            .collect();
        Self::new(field, grid, ranks.to_vec(), steps, true)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn grid(&self) -> &[BigRational] {
        &self.grid
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn steps(&self) -> &[ExactMatrix] {
        &self.steps
    }

    pub fn is_stabilized(&self) -> bool {
        self.stabilized
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn last(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn with_stabilized(mut self, stabilized: bool) -> Self {
        self.stabilized = stabilized;
        self
    }

    /// Grid index carrying `V_y`, or `None` when `y` lies before the window
    /// or past an unstabilized end.
    pub fn resolve(&self, y: &BigRational) -> Option<usize> {
        if y < &self.grid[0] {
            return None;
        }
        if y > &self.grid[self.last()] && !self.stabilized {
            return None;
        }
        Some(self.grid.partition_point(|x| x <= y) - 1)
    }

    fn check_index(&self, i: usize) -> Result<(), FdsError> {
        if i >= self.len() {
            Err(FdsError::IndexOutOfRange { index: i, len: self.len() })
        } else {
            Ok(())
        }
    }

    /// `ψ_{x_i, x_j}` as a `dims[j] x dims[i]` matrix.
    pub fn transition(&self, i: usize, j: usize) -> Result<ExactMatrix, FdsError> {
        self.check_index(j)?;
        if i > j {
            return Err(FdsError::IndexOutOfRange { index: i, len: j + 1 });
        }
        let mut acc = ExactMatrix::identity(self.field, self.dims[i]);
        for s in &self.steps[i..j] {
            acc = s.mul(&acc)?;
        }
        Ok(acc)
    }

    pub fn transition_rank(&self, i: usize, j: usize) -> Result<usize, FdsError> {
        Ok(self.transition(i, j)?.rank())
    }

    /// `ψ_{y, z}` between arbitrary points; `None` if either is unresolvable.
    pub fn transition_between(&self, y: &BigRational, z: &BigRational) -> Result<Option<ExactMatrix>, FdsError> {
        match (self.resolve(y), self.resolve(z)) {
            (Some(i), Some(j)) if y <= z => self.transition(i, j).map(Some),
            (Some(_), Some(_)) => Err(FdsError::InvalidSystem(format!("{y} > {z}"))),
            _ => Ok(None),
        }
    }

    pub fn rank_between(&self, y: &BigRational, z: &BigRational) -> Result<Option<usize>, FdsError> {
        Ok(self.transition_between(y, z)?.map(|m| m.rank()))
    }

    /// `a(x_i)`: the rank of `V_{x_i}` in the colimit.
    pub fn colimit_rank(&self, i: usize) -> Result<usize, FdsError> {
        if !self.stabilized {
            return Err(FdsError::NotStabilized);
        }
        self.check_index(i)?;
        self.transition_rank(i, self.last())
    }

    /// `a(x_i)` for every grid point.
    pub fn a_table(&self) -> Result<Vec<usize>, FdsError> {
        if !self.stabilized {
            return Err(FdsError::NotStabilized);
        }
        // sweep backwards, carrying ψ_{x_i, x_m}
        let m = self.last();
        let mut out = vec![0; self.len()];
        let mut acc = ExactMatrix::identity(self.field, self.dims[m]);
        out[m] = self.dims[m];
        for i in (0..m).rev() {
            acc = acc.mul(&self.steps[i])?;
            out[i] = acc.rank();
        }
        Ok(out)
    }

    /// Re-expresses the system on `grid`, composing steps between the new
    /// points. Every new point must be resolvable.
    pub fn resample(&self, grid: &[BigRational]) -> Result<Self, FdsError> {
        check_grid(grid)?;
        let idx = grid
            .iter()
            .map(|y| {
                self.resolve(y)
                    .ok_or_else(|| FdsError::GridMismatch(format!("{y} is outside the window")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let dims = idx.iter().map(|&i| self.dims[i]).collect();
        let steps = idx
            .windows(2)
            .map(|w| self.transition(w[0], w[1]))
            .collect::<Result<Vec<_>, _>>()?;
        let last = grid.last().expect("nonempty");
        let stabilized = self.stabilized && last >= &self.grid[self.last()];
        Self::new(self.field, grid.to_vec(), dims, steps, stabilized)
    }

    /// Keeps only the first `n` grid points; the result is not stabilized.
    pub fn truncate(&self, n: usize) -> Result<Self, FdsError> {
        if n == 0 || n > self.len() {
            return Err(FdsError::IndexOutOfRange { index: n, len: self.len() });
        }
        Self::new(
            self.field,
            self.grid[..n].to_vec(),
            self.dims[..n].to_vec(),
            self.steps[..n - 1].to_vec(),
            self.stabilized && n == self.len(),
        )
    }
}

/// Resamples both systems to the union of their grids, dropping points that
/// either cannot resolve.
pub fn align(v: &ConcreteFds, w: &ConcreteFds) -> Result<(ConcreteFds, ConcreteFds), FdsError> {
    if v.field != w.field {
        return Err(FdsError::GridMismatch(format!("fields {} and {}", v.field, w.field)));
    }
    let mut grid: Vec<BigRational> = v.grid.iter().chain(&w.grid).cloned().collect();
    grid.sort();
    grid.dedup();
    grid.retain(|y| v.resolve(y).is_some() && w.resolve(y).is_some());
    if grid.is_empty() {
        return Err(FdsError::GridMismatch("windows do not overlap".into()));
    }
    Ok((v.resample(&grid)?, w.resample(&grid)?))
}

fn check_grid(grid: &[BigRational]) -> Result<(), FdsError> {
    if grid.is_empty() {
        return Err(FdsError::InvalidSystem("empty grid".into()));
    }
    if grid[0] < BigRational::one() {
        return Err(FdsError::InvalidSystem(format!("grid starts at {} < 1", grid[0])));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FdsError::InvalidSystem("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Inclusion of the first `from` coordinates into a space of dimension `to`.
pub(crate) fn inclusion(field: Field, from: usize, to: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, to, from);
    for k in 0..from.min(to) {
        m.set(k, k, BigRational::one()).expect("unit entry");
    }
    m
}

#[derive(Serialize, Deserialize)]
struct FdsWire {
    #[serde(default)]
    field: Field,
    #[serde(with = "crate::serde_util::rational_vec")]
    grid: Vec<BigRational>,
    dims: Vec<usize>,
    steps: Vec<StepWire>,
    #[serde(default)]
    stabilized: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct StepWire(#[serde(with = "crate::serde_util::rational_rows")] Vec<Vec<BigRational>>);

impl TryFrom<FdsWire> for ConcreteFds {
    type Error = FdsError;

    fn try_from(w: FdsWire) -> Result<Self, FdsError> {
        if w.steps.len() + 1 != w.dims.len() {
            return Err(FdsError::InvalidSystem(format!(
                "{} dims need {} steps, found {}",
                w.dims.len(),
                w.dims.len().saturating_sub(1),
                w.steps.len()
            )));
        }
        let mut steps = Vec::with_capacity(w.steps.len());
        for (i, StepWire(rows)) in w.steps.into_iter().enumerate() {
            let (r, c) = (w.dims[i + 1], w.dims[i]);
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(FdsError::InvalidSystem(format!("step {i} is not {r}x{c}")));
            }
            let entries = rows.into_iter().flatten().collect();
            steps.push(ExactMatrix::new(w.field, r, c, entries)?);
        }
        ConcreteFds::new(w.field, w.grid, w.dims, steps, w.stabilized)
    }
}

impl From<ConcreteFds> for FdsWire {
    fn from(v: ConcreteFds) -> Self {
        FdsWire {
            field: v.field,
            grid: v.grid,
            dims: v.dims,
            steps: v.steps.iter().map(|s| StepWire(s.to_rows())).collect(),
            stabilized: v.stabilized,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fds::int_grid;

    fn f2(rows: &[Vec<i64>], cols: usize) -> ExactMatrix {
        ExactMatrix::from_i64_rows(Field::F2, cols, rows).unwrap()
    }

    #[test]
    fn identity_and_zero_transitions() {
        let v = ConcreteFds::constant(Field::F2, int_grid(&[1, 2, 3]), 3, true).unwrap();
        assert_eq!(v.transition_rank(1, 1).unwrap(), 3);
        let z = ConcreteFds::new(
            Field::F2,
            int_grid(&[1, 2, 3]),
            vec![2, 2, 2],
            vec![ExactMatrix::zeros(Field::F2, 2, 2), ExactMatrix::zeros(Field::F2, 2, 2)],
            false,
        )
        .unwrap();
        assert_eq!(z.transition_rank(0, 2).unwrap(), 0);
        assert_eq!(z.transition_rank(0, 1).unwrap(), 0);
    }

    #[test]
    fn project_then_include() {
        let v = ConcreteFds::new(
            Field::Rational,
            int_grid(&[1, 2, 3]),
            vec![2, 1, 2],
            vec![
                ExactMatrix::from_i64_rows(Field::Rational, 2, &[vec![1, 0]]).unwrap(),
                ExactMatrix::from_i64_rows(Field::Rational, 1, &[vec![1], vec![0]]).unwrap(),
            ],
            true,
        )
        .unwrap();
        assert_eq!(v.transition_rank(0, 2).unwrap(), 1);
    }

    #[test]
    fn colimit_requires_stabilization() {
        let v = ConcreteFds::constant(Field::F2, int_grid(&[1, 2]), 1, false).unwrap();
        assert!(matches!(v.colimit_rank(0), Err(FdsError::NotStabilized)));
        let v = v.with_stabilized(true);
        assert_eq!(v.a_table().unwrap(), vec![1, 1]);
    }

    #[test]
    fn last_step_zero_kills_everything_before() {
        let v = ConcreteFds::new(
            Field::F2,
            int_grid(&[1, 2, 3]),
            vec![2, 2, 2],
            vec![ExactMatrix::identity(Field::F2, 2), ExactMatrix::zeros(Field::F2, 2, 2)],
            true,
        )
        .unwrap();
        assert_eq!(v.a_table().unwrap(), vec![0, 0, 2]);
    }

    #[test]
    fn nilpotent_shift_tables() {
        // the same strictly upper triangular shift at every step
        let n = 4;
        let mut rows = vec![vec![0i64; n]; n];
        for k in 0..n - 1 {
            rows[k][k + 1] = 1;
        }
        let shift = f2(&rows, n);
        let m = 6;
        let v = ConcreteFds::new(
            Field::F2,
            int_grid(&(1..=m as i64).collect::<Vec<_>>()),
            vec![n; m],
            vec![shift; m - 1],
            true,
        )
        .unwrap();
        let expected: Vec<usize> = (0..m).map(|i| n.saturating_sub(m - 1 - i)).collect();
        assert_eq!(v.a_table().unwrap(), expected);
        // ψ_{x_i,x_j} has rank n-(j-i), clamped at zero
        for i in 0..m {
            for j in i..m {
                assert_eq!(v.transition_rank(i, j).unwrap(), n.saturating_sub(j - i));
            }
        }
    }

    #[test]
    fn resolve_rules() {
        let v = ConcreteFds::constant(Field::F2, int_grid(&[2, 4]), 1, false).unwrap();
        assert_eq!(v.resolve(&BigRational::from_integer(1.into())), None);
        assert_eq!(v.resolve(&BigRational::from_integer(3.into())), Some(0));
        assert_eq!(v.resolve(&BigRational::from_integer(4.into())), Some(1));
        assert_eq!(v.resolve(&BigRational::from_integer(5.into())), None);
        let v = v.with_stabilized(true);
        assert_eq!(v.resolve(&BigRational::from_integer(50.into())), Some(1));
    }

    #[test]
    fn resample_preserves_ranks() {
        let v = ConcreteFds::from_rank_table(Field::F2, int_grid(&[1, 3, 5]), &[1, 2, 4]).unwrap();
        let r = v.resample(&int_grid(&[1, 2, 3, 4, 5, 6])).unwrap();
        assert_eq!(r.a_table().unwrap(), vec![1, 1, 2, 2, 4, 4]);
    }

    #[test]
    fn json_round_trip() {
        let v = ConcreteFds::from_rank_table(Field::Rational, int_grid(&[1, 2]), &[1, 2]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: ConcreteFds = serde_json::from_str(&s).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn rejects_bad_shapes() {
        let bad = ConcreteFds::new(
            Field::F2,
            int_grid(&[1, 2]),
            vec![1, 2],
            vec![ExactMatrix::zeros(Field::F2, 1, 2)],
            false,
        );
        assert!(matches!(bad, Err(FdsError::InvalidSystem(_))));
    }
}
