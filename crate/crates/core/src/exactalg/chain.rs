use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::integer::{integer_kernel, smith_normal_form, IntegerMatrix};
use super::AlgebraError;

/// Finite free chain complex over Z.
///
/// `boundaries[i - 1]` holds `d_i: C_i -> C_{i-1}` for `1 <= i <= top_degree`,
/// shaped `ranks[i-1] x ranks[i]`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ChainWire", try_from = "ChainWire")]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<IntegerMatrix>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Rows(#[serde(with = "crate::serde_util::bigint_rows")] Vec<Vec<BigInt>>);

#[derive(Serialize, Deserialize)]
struct ChainWire {
    groups: Vec<usize>,
    boundaries: Vec<Rows>,
}

impl From<ChainComplex> for ChainWire {
    fn from(c: ChainComplex) -> Self {
        ChainWire {
            boundaries: c.boundaries.iter().map(|d| Rows(d.to_rows())).collect(),
            groups: c.ranks,
        }
    }
}

impl TryFrom<ChainWire> for ChainComplex {
    type Error = AlgebraError;
    fn try_from(w: ChainWire) -> Result<Self, Self::Error> {
        if w.groups.is_empty() || w.boundaries.len() + 1 != w.groups.len() {
            return Err(AlgebraError::InvalidComplex("need one boundary per positive degree".into()));
        }
        let mut boundaries = Vec::with_capacity(w.boundaries.len());
        for (k, Rows(rows)) in w.boundaries.into_iter().enumerate() {
            let (r, c) = (w.groups[k], w.groups[k + 1]);
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(AlgebraError::InvalidComplex(format!("d_{} is not {r}x{c}", k + 1)));
            }
            boundaries.push(IntegerMatrix::new(r, c, rows.into_iter().flatten().collect())?);
        }
        ChainComplex::new(w.groups, boundaries)
    }
}

/// Cycle representatives generating `H_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyBasis {
    /// One cycle per free summand.
    pub free: Vec<Vec<BigInt>>,
    /// `(order, cycle)` per cyclic torsion summand.
    pub torsion: Vec<(BigInt, Vec<BigInt>)>,
}

/// One homology group `Z^betti ⊕ Z/t_1 ⊕ ... ⊕ Z/t_r` with `t_1 | ... | t_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn is_z(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }

    pub fn free(betti: usize) -> Self {
        Self {
            betti,
            torsion: Vec::new(),
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Homology in every degree `0..=top_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub degrees: Vec<HomologyGroup>,
}

impl HomologySummary {
    pub fn get(&self, degree: usize) -> HomologyGroup {
        self.degrees
            .get(degree)
            .cloned()
            .unwrap_or_else(|| HomologyGroup::free(0))
    }

    /// Degrees carrying nonzero homology.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degrees.len())
            .filter(|&i| !self.degrees[i].is_zero())
            .collect()
    }

    /// `H_0 = Z` and nothing else.
    pub fn is_acyclic(&self) -> bool {
        self.get(0).is_z() && self.support() == vec![0]
    }

    /// `H_0 = H_d = Z` and zero elsewhere, for some `d > 0`; returns `d`.
    pub fn sphere_degree(&self) -> Option<usize> {
        match self.support().as_slice() {
            [0, d] if self.get(0).is_z() && self.get(*d).is_z() => Some(*d),
            _ => None,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(i, g)| if i % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
            .sum()
    }
}

impl fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .degrees
            .iter()
            .enumerate()
            .map(|(i, g)| format!("H{i}={g}"))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

impl ChainComplex {
    /// Validates shapes and `d_{i-1} d_i = 0`.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<IntegerMatrix>) -> Result<Self, AlgebraError> {
        if ranks.is_empty() {
            return Err(AlgebraError::InvalidComplex("no degrees".into()));
        }
        if boundaries.len() != ranks.len() - 1 {
            return Err(AlgebraError::InvalidComplex(format!(
                "expected {} boundary maps, found {}",
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        for (k, d) in boundaries.iter().enumerate() {
            let i = k + 1;
            if d.shape() != (ranks[i - 1], ranks[i]) {
                return Err(AlgebraError::InvalidComplex(format!(
                    "d_{i} has shape {:?}, expected {:?}",
                    d.shape(),
                    (ranks[i - 1], ranks[i])
                )));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].mul(&boundaries[k])?.is_zero() {
                return Err(AlgebraError::InvalidComplex(format!(
                    "d_{} d_{} != 0",
                    k,
                    k + 1
                )));
            }
        }
        Ok(Self { ranks, boundaries })
    }

    /// A single cell in each listed degree, zero differentials.
    pub fn with_zero_differentials(ranks: Vec<usize>) -> Self {
        let boundaries = (1..ranks.len())
            .map(|i| IntegerMatrix::zeros(ranks[i - 1], ranks[i]))
            .collect();
        Self { ranks, boundaries }
    }

    pub fn point() -> Self {
        Self::with_zero_differentials(vec![1])
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.ranks.get(degree).copied().unwrap_or(0)
    }

    pub fn boundaries(&self) -> &[IntegerMatrix] {
        &self.boundaries
    }

    /// `d_i`; the zero map outside `1..=top_degree`.
    pub fn boundary(&self, i: usize) -> IntegerMatrix {
        if i >= 1 && i <= self.top_degree() {
            self.boundaries[i - 1].clone()
        } else {
            let src = self.rank(i);
            let tgt = if i == 0 { 0 } else { self.rank(i - 1) };
            IntegerMatrix::zeros(tgt, src)
        }
    }

    /// Whether `v` in `C_degree` is a cycle.
    pub fn is_cycle(&self, degree: usize, v: &[BigInt]) -> Result<bool, AlgebraError> {
        if v.len() != self.rank(degree) {
            return Err(AlgebraError::DimensionMismatch {
                left: self.boundary(degree).shape(),
                right: (v.len(), 1),
            });
        }
        Ok(self.boundary(degree).mul_vec(v)?.iter().all(Zero::is_zero))
    }

    /// Appends cells in `degree` with the given boundary columns.
    pub fn attach_cells(&self, degree: usize, boundary_columns: &[Vec<BigInt>]) -> Result<Self, AlgebraError> {
        let mut ranks = self.ranks.clone();
        while ranks.len() <= degree {
            ranks.push(0);
        }
        let mut boundaries: Vec<IntegerMatrix> =
            (1..ranks.len()).map(|i| self.boundary(i)).collect();
        let added = boundary_columns.len();
        if degree > 0 {
            let below = ranks[degree - 1];
            let new_cols = IntegerMatrix::from_columns(below, boundary_columns);
            boundaries[degree - 1] = boundaries[degree - 1].hstack(&new_cols)?;
        } else if boundary_columns.iter().any(|c| !c.is_empty()) {
            return Err(AlgebraError::InvalidComplex("0-cells have no boundary".into()));
        }
        if degree < boundaries.len() {
            boundaries[degree] = boundaries[degree].with_zero_rows(added);
        }
        ranks[degree] += added;
        Self::new(ranks, boundaries)
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let top = self.top_degree().max(other.top_degree());
        let ranks = (0..=top).map(|i| self.rank(i) + other.rank(i)).collect();
        let boundaries = (1..=top)
            .map(|i| self.boundary(i).block_diag(&other.boundary(i)))
            .collect();
        Self { ranks, boundaries }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| if i % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}

/// Integral homology via Smith normal forms of the boundary maps.
pub fn homology(c: &ChainComplex) -> HomologySummary {
    let top = c.top_degree();
    let mut ranks_of_d = vec![0usize; top + 2];
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    for i in 1..=top {
        let snf = smith_normal_form(&c.boundary(i));
        let inv = snf.invariant_factors();
        ranks_of_d[i] = inv.len();
        factors[i] = inv.into_iter().filter(|x| !x.is_one()).collect();
    }
    let degrees = (0..=top)
        .map(|i| HomologyGroup {
            betti: c.rank(i) - ranks_of_d[i] - ranks_of_d[i + 1],
            torsion: factors[i + 1].clone(),
        })
        .collect();
    HomologySummary { degrees }
}

/// Cycles whose classes form an invariant-factor basis of `H_degree`.
///
/// With `K` a Z-basis of `ker d_degree`, the boundaries `d_{degree+1}` are
/// rewritten in `K`-coordinates and put in Smith form; the change of basis
/// splits the cycles into free and torsion generators.
pub fn homology_generators(c: &ChainComplex, degree: usize) -> Result<HomologyBasis, AlgebraError> {
    let k = integer_kernel(&c.boundary(degree));
    let r = k.cols();
    if r == 0 {
        return Ok(HomologyBasis { free: Vec::new(), torsion: Vec::new() });
    }
    let next = c.boundary(degree + 1);
    // K = U^-1 [I; 0] V^-1 because a kernel basis is saturated
    let ks = smith_normal_form(&k);
    let top = ks.u.mul(&next)?;
    let top_rows: Vec<Vec<BigInt>> = top.to_rows().into_iter().take(r).collect();
    let top = IntegerMatrix::new(r, next.cols(), top_rows.into_iter().flatten().collect())?;
    let coords = ks.v.mul(&top)?;
    let ys = smith_normal_form(&coords);
    let basis = ys.u.unimodular_inverse()?;
    let factors = ys.invariant_factors();
    let mut out = HomologyBasis { free: Vec::new(), torsion: Vec::new() };
    for i in 0..r {
        let cycle = k.mul_vec(&basis.column(i))?;
        match factors.get(i) {
            None => out.free.push(cycle),
            Some(f) if !f.is_one() => out.torsion.push((f.clone(), cycle)),
            Some(_) => {}
        }
    }
    Ok(out)
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainComplex")
            .field("ranks", &self.ranks)
            .field("boundaries", &self.boundaries)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_pattern() {
        let c = ChainComplex::with_zero_differentials(vec![1, 0, 0, 0, 0, 0, 1]);
        let h = homology(&c);
        assert_eq!(h.sphere_degree(), Some(6));
        assert_eq!(h.support(), vec![0, 6]);
    }

    #[test]
    fn multiplication_by_two() {
        let d1 = IntegerMatrix::from_i64_rows(1, &[vec![2]]).unwrap();
        let c = ChainComplex::new(vec![1, 1], vec![d1]).unwrap();
        let h = homology(&c);
        assert_eq!(h.get(0), HomologyGroup { betti: 0, torsion: vec![BigInt::from(2)] });
        assert!(h.get(1).is_zero());
    }

    #[test]
    fn point_complex() {
        assert!(homology(&ChainComplex::point()).is_acyclic());
    }

    #[test]
    fn rejects_non_complex() {
        let d1 = IntegerMatrix::from_i64_rows(1, &[vec![1]]).unwrap();
        let d2 = IntegerMatrix::from_i64_rows(1, &[vec![1]]).unwrap();
        assert!(matches!(
            ChainComplex::new(vec![1, 1, 1], vec![d1, d2]),
            Err(AlgebraError::InvalidComplex(_))
        ));
    }

    #[test]
    fn generators_of_commutator_complex() {
        // torus: one 0-cell, two 1-cells, one 2-cell with zero boundary
        let c = ChainComplex::with_zero_differentials(vec![1, 2, 1]);
        let b = homology_generators(&c, 1).unwrap();
        assert_eq!(b.free.len(), 2);
        assert_eq!(homology_generators(&c, 2).unwrap().free, vec![vec![BigInt::one()]]);
    }

    #[test]
    fn torsion_generator_found() {
        // C_1 = Z^2, C_2 = Z with d_2 = (2, 4): H_1 = Z + Z/2
        let d2 = IntegerMatrix::from_i64_rows(1, &[vec![2], vec![4]]).unwrap();
        let c = ChainComplex::new(vec![0, 2, 1], vec![IntegerMatrix::zeros(0, 2), d2]).unwrap();
        let b = homology_generators(&c, 1).unwrap();
        assert_eq!(b.free.len(), 1);
        assert_eq!(b.torsion.len(), 1);
        assert_eq!(b.torsion[0].0, BigInt::from(2));
        // twice the torsion cycle is a boundary
        let twice: Vec<BigInt> = b.torsion[0].1.iter().map(|x| x * 2).collect();
        assert!(twice == vec![BigInt::from(2), BigInt::from(4)] || twice == vec![BigInt::from(-2), BigInt::from(-4)]);
    }

    #[test]
    fn json_round_trip() {
        let d2 = IntegerMatrix::from_i64_rows(1, &[vec![2], vec![4]]).unwrap();
        let c = ChainComplex::new(vec![0, 2, 1], vec![IntegerMatrix::zeros(0, 2), d2]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"groups":[0,2,1],"boundaries":[[],[["2"],["4"]]]}"#);
        assert_eq!(serde_json::from_str::<ChainComplex>(&s).unwrap(), c);
        assert!(serde_json::from_str::<ChainComplex>(r#"{"groups":[1,1,1],"boundaries":[[[1]],[[1]]]}"#).is_err());
    }

    #[test]
    fn attach_cells_extends_degrees() {
        let c = ChainComplex::point()
            .attach_cells(1, &[vec![BigInt::zero()]])
            .unwrap();
        assert_eq!(homology(&c).get(1), HomologyGroup::free(1));
        let c2 = c.attach_cells(2, &[vec![BigInt::from(3)]]).unwrap();
        let h = homology(&c2);
        assert_eq!(h.get(1).torsion, vec![BigInt::from(3)]);
        assert_eq!(c2.euler_characteristic(), h.euler_characteristic());
    }
}
