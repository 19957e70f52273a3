use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "IntWire", try_from = "IntWire")]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// `U * m * V = D` with `U`, `V` unimodular and `D` in Smith form.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries of `D`, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::EntryCount {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Result<Self, AlgebraError> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(AlgebraError::EntryCount {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, v) in c.iter().enumerate() {
                m.entries[i * m.cols + j] = v.clone();
            }
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.cols != rhs.rows {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn block_diag(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        out
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if self.rows != rhs.rows {
            return Err(AlgebraError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, rhs);
        Ok(out)
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entries[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    /// Same matrix with `extra` zero rows appended.
    pub fn with_zero_rows(&self, extra: usize) -> Self {
        let mut out = Self::zeros(self.rows + extra, self.cols);
        out.paste(0, 0, self);
        out
    }

    /// Determinant via fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare(self.shape()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_dst += c * row_src
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let t = self.get(src, j) * c;
            self.entries[dst * self.cols + j] += t;
        }
    }

    /// col_dst += c * col_src
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let t = self.get(i, src) * c;
            self.entries[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.entries[idx] = -&self.entries[idx];
        }
    }
}

/// Smith normal form by gcd-driven elementary operations.
///
/// Pivots are chosen by minimal absolute value in the active submatrix.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = m.shape();
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the active block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let e = d.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| e.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                let neg = -q;
                d.add_row(i, t, &neg);
                u.add_row(i, t, &neg);
                dirty |= !d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                let neg = -q;
                d.add_col(j, t, &neg);
                v.add_col(j, t, &neg);
                dirty |= !d.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // pivot must divide the remaining block
            let p = d.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(u: IntegerMatrix, d: IntegerMatrix, v: IntegerMatrix) -> SmithDecomposition {
    SmithDecomposition { u, d, v }
}

impl IntegerMatrix {
    /// Inverse of a unimodular matrix, read off its Smith decomposition.
    pub fn unimodular_inverse(&self) -> Result<IntegerMatrix, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare(self.shape()));
        }
        let snf = smith_normal_form(self);
        let f = snf.invariant_factors();
        if f.len() != self.rows || f.iter().any(|x| !x.is_one()) {
            return Err(AlgebraError::NotUnimodular);
        }
        snf.v.mul(&snf.u)
    }
}

/// Z-basis of the kernel of `m`, as the columns of `V` beyond the rank.
pub fn integer_kernel(m: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let cols: Vec<Vec<BigInt>> = (r..m.cols).map(|j| snf.v.column(j)).collect();
    IntegerMatrix::from_columns(m.cols, &cols)
}

#[derive(Serialize, Deserialize)]
struct IntWire {
    rows: usize,
    cols: usize,
    #[serde(with = "crate::serde_util::bigint_rows")]
    data: Vec<Vec<BigInt>>,
}

impl From<IntegerMatrix> for IntWire {
    fn from(m: IntegerMatrix) -> Self {
        IntWire {
            rows: m.rows,
            cols: m.cols,
            data: m.to_rows(),
        }
    }
}

impl TryFrom<IntWire> for IntegerMatrix {
    type Error = AlgebraError;
    fn try_from(w: IntWire) -> Result<Self, AlgebraError> {
        if w.data.len() != w.rows || w.data.iter().any(|r| r.len() != w.cols) {
            return Err(AlgebraError::EntryCount {
                expected: w.rows * w.cols,
                found: w.data.iter().map(Vec::len).sum(),
            });
        }
        IntegerMatrix::new(w.rows, w.cols, w.data.into_iter().flatten().collect())
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerMatrix{}x{}[", self.rows, self.cols)?;
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

    fn im(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(rows.first().map_or(0, Vec::len), rows).unwrap()
    }

    fn check(m: &IntegerMatrix) -> SmithDecomposition {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        s
    }

    #[test]
    fn unimodular_inverse_round_trip() {
        let m = IntegerMatrix::from_i64_rows(2, &[vec![2, 3], vec![1, 2]]).unwrap();
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntegerMatrix::identity(2));
        let singular = IntegerMatrix::from_i64_rows(2, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(singular.unimodular_inverse(), Err(AlgebraError::NotUnimodular));
    }

    #[test]
    fn diag_2_3() {
        let s = check(&im(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.d, im(&[vec![1, 0], vec![0, 6]]));
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntegerMatrix::zeros(2, 3));
        assert!(s.d.is_zero());
    }

    #[test]
    fn two_by_two() {
        let s = check(&im(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.d, im(&[vec![2, 0], vec![0, 4]]));
    }

    #[test]
    fn determinant_values() {
        assert_eq!(im(&[vec![-1, 3], vec![2, -5]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(im(&[vec![0, 1], vec![1, 0]]).determinant().unwrap(), BigInt::from(-1));
        assert_eq!(
            im(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]).determinant().unwrap(),
            BigInt::from(0)
        );
        assert_eq!(
            im(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]).determinant().unwrap(),
            BigInt::from(6)
        );
    }

    #[test]
    fn kernel_basis() {
        let m = im(&[vec![1, 1, 0], vec![0, 2, 2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).unwrap().is_zero());
        assert!(k.column(0).iter().all(|x| x.abs().is_one()));
    }
}
