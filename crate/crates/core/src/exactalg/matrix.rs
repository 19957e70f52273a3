use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgebraError, Field};

/// Dense matrix over a [`Field`], stored row-major.
///
/// A linear map `V -> W` is a `dim W x dim V` matrix acting on column vectors.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "MatrixWire", try_from = "MatrixWire")]
pub struct ExactMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn new(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<BigRational>,
    ) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::EntryCount {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let entries = entries
            .iter()
            .map(|e| field.reduce(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    /// Builds a matrix from integer rows. All rows must share a length; `cols`
    /// disambiguates the empty case.
    pub fn from_i64_rows(field: Field, cols: usize, rows: &[Vec<i64>]) -> Result<Self, AlgebraError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(AlgebraError::EntryCount {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r.iter().map(|&v| field.from_i64(v)));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<BigRational>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.iter().enumerate() {
                m.entries[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) -> Result<(), AlgebraError> {
        let v = self.field.reduce(&v)?;
        self.entries[i * self.cols + j] = v;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.field, self.rows)
    }

    fn check_field(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field != other.field {
            Err(AlgebraError::FieldMismatch(self.field, other.field))
        } else {
            Ok(())
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.entries[idx] = f.add(&out.entries[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_field(rhs)?;
        if self.shape() != rhs.shape() {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Ok(Self { entries, ..self.clone() })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.add(&rhs.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let f = self.field;
        let entries = self.entries.iter().map(|a| f.mul(a, c)).collect();
        Self { entries, ..self.clone() }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Kronecker product; represents the tensor product of two maps.
    pub fn kron(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_field(rhs)?;
        let f = self.field;
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = Self::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.entries[(i * rhs.rows + k) * c + j * rhs.cols + l] =
                            f.mul(a, rhs.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal sum `self ⊕ rhs`.
    pub fn block_diag(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_field(rhs)?;
        let mut out = Self::zeros(self.field, self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        Ok(out)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entries[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    /// Submatrix with the listed rows and columns, in the listed order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.entries[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, rhs);
        Ok(out)
    }

    pub fn vstack(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_field(rhs)?;
        if self.cols != rhs.cols {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.field, self.rows + rhs.rows, self.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, 0, rhs);
        Ok(out)
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn echelon(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.entries[idx] = f.mul(&m.entries[idx], &inv);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let t = f.mul(&factor, m.get(r, j));
                    let idx = i * m.cols + j;
                    m.entries[idx] = f.sub(&m.entries[idx], &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the null space, as columns of the returned `cols x k` matrix.
    pub fn kernel(&self) -> Self {
        let f = self.field;
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.entries[fc * free.len() + k] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                out.entries[pc * free.len() + k] = f.neg(reduced.get(r, fc));
            }
        }
        out
    }

    /// Basis of the column space, chosen among the original columns.
    pub fn image(&self) -> Self {
        let pivots = self.echelon().pivots;
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, &pivots)
    }

    /// Solves `self * X = rhs`, returning one solution if any exists.
    pub fn solve(&self, rhs: &Self) -> Result<Option<Self>, AlgebraError> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let f = self.field;
        let aug = self.hstack(rhs)?;
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.entries[pc * rhs.cols + j] = reduced.get(r, self.cols + j).clone();
            }
        }
        Ok(Some(x))
    }

    /// Whether `rhs`'s columns lie in the column space of `self`.
    pub fn spans(&self, rhs: &Self) -> Result<bool, AlgebraError> {
        Ok(self.solve(rhs)?.is_some())
    }
}

/// Rank of the composite of maps applied in order: `ms[0]` first.
pub fn rank_of_composite(ms: &[ExactMatrix]) -> Result<usize, AlgebraError> {
    Ok(composite(ms)?.map_or(0, |m| m.rank()))
}

/// Product `ms[n-1] * ... * ms[0]`; `None` for an empty list.
pub fn composite(ms: &[ExactMatrix]) -> Result<Option<ExactMatrix>, AlgebraError> {
    let mut it = ms.iter();
    let Some(first) = it.next() else {
        return Ok(None);
    };
    let mut acc = first.clone();
    for m in it {
        acc = m.mul(&acc)?;
    }
    Ok(Some(acc))
}

pub fn rank(m: &ExactMatrix) -> usize {
    m.rank()
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    #[serde(default)]
    field: Field,
    rows: usize,
    cols: usize,
    #[serde(with = "crate::serde_util::rational_rows")]
    data: Vec<Vec<BigRational>>,
}

impl From<ExactMatrix> for MatrixWire {
    fn from(m: ExactMatrix) -> Self {
        MatrixWire {
            field: m.field,
            rows: m.rows,
            cols: m.cols,
            data: m.to_rows(),
        }
    }
}

impl TryFrom<MatrixWire> for ExactMatrix {
    type Error = AlgebraError;
    fn try_from(w: MatrixWire) -> Result<Self, AlgebraError> {
        if w.data.len() != w.rows || w.data.iter().any(|r| r.len() != w.cols) {
            return Err(AlgebraError::EntryCount {
                expected: w.rows * w.cols,
                found: w.data.iter().map(Vec::len).sum(),
            });
        }
        ExactMatrix::new(w.field, w.rows, w.cols, w.data.into_iter().flatten().collect())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix<{}>{}x{}[", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            f.write_str(&row.join(" "))?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> ExactMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        ExactMatrix::from_i64_rows(Field::Rational, cols, rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::zeros(Field::F2, 3, 3).rank(), 0);
        assert_eq!(ExactMatrix::identity(Field::Rational, 3).rank(), 3);
        assert_eq!(q(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        // over F_2 the second row vanishes entirely
        let m = ExactMatrix::from_i64_rows(Field::F2, 2, &[vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn composite_rank_examples() {
        let id = ExactMatrix::identity(Field::Rational, 2);
        assert_eq!(rank_of_composite(&[id.clone(), id.clone()]).unwrap(), 2);
        let a = q(&[vec![3, 1], vec![1, 7]]);
        assert_eq!(rank_of_composite(&[a, ExactMatrix::zeros(Field::Rational, 2, 2)]).unwrap(), 0);
        let row = q(&[vec![1, 0]]);
        let col = q(&[vec![1], vec![1]]);
        assert_eq!(rank_of_composite(&[row, col]).unwrap(), 1);
        let bad = rank_of_composite(&[q(&[vec![1, 0]]), q(&[vec![1, 0]])]);
        assert!(matches!(bad, Err(AlgebraError::DimensionMismatch { .. })));
    }

    #[test]
    fn kernel_and_solve() {
        let m = q(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
        let rhs = q(&[vec![6], vec![12]]);
        let x = m.solve(&rhs).unwrap().unwrap();
        assert_eq!(m.mul(&x).unwrap(), rhs);
        assert!(m.solve(&q(&[vec![1], vec![0]])).unwrap().is_none());
    }

    #[test]
    fn kron_and_blocks() {
        let a = q(&[vec![1, 2], vec![0, 1]]);
        let b = q(&[vec![0, 1]]);
        let k = a.kron(&b).unwrap();
        assert_eq!(k.shape(), (2, 4));
        assert_eq!(k, q(&[vec![0, 1, 0, 2], vec![0, 0, 0, 1]]));
        let d = a.block_diag(&b).unwrap();
        assert_eq!(d.shape(), (3, 4));
        assert_eq!(d.rank(), 3);
    }
}
