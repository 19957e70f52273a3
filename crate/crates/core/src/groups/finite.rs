use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::word::Word;
use super::GroupError;

/// Orders up to this size get an exhaustive associativity check.
const FULL_CHECK_ORDER: usize = 48;
const SPOT_CHECKS: usize = 4000;

/// A finite group as its right regular action by a generating set.
///
/// Elements are `0..order` with `0` the identity; element `e` is reached
/// from `0` along a shortest word, so `word_length` is the Cayley-graph
/// distance. Products are evaluated by walking that word, which keeps the
/// storage linear in the order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableWire", into = "TableWire")]
pub struct FiniteGroupTable {
    right: Vec<Vec<u32>>,
    right_inv: Vec<Vec<u32>>,
    parent: Vec<(u32, i32)>,
    dist: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct TableWire {
    order: usize,
    generator_images: Vec<usize>,
    generator_permutations: Vec<Vec<u32>>,
}

impl From<FiniteGroupTable> for TableWire {
    fn from(t: FiniteGroupTable) -> Self {
        TableWire {
            order: t.order(),
            generator_images: t.generator_images(),
            generator_permutations: t.right,
        }
    }
}

impl TryFrom<TableWire> for FiniteGroupTable {
    type Error = GroupError;
    fn try_from(w: TableWire) -> Result<Self, Self::Error> {
        let t = FiniteGroupTable::from_right_action(w.generator_permutations)?;
        if t.order() != w.order || t.generator_images() != w.generator_images {
            return Err(GroupError::InvalidTable("order or generator images disagree with the permutations".into()));
        }
        Ok(t)
    }
}

fn invert_perm(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

impl FiniteGroupTable {
    /// Builds from the permutations `e -> e g_i` of `0..order`.
    pub fn from_right_action(right: Vec<Vec<u32>>) -> Result<Self, GroupError> {
        let n = match right.first() {
            Some(p) => p.len(),
            None => 1,
        };
        if n == 0 {
            return Err(GroupError::InvalidTable("empty group".into()));
        }
        for p in &right {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&x| (x as usize) >= n || std::mem::replace(&mut seen[x as usize], true)) {
                return Err(GroupError::InvalidTable("generator action is not a permutation".into()));
            }
        }
        let right_inv: Vec<Vec<u32>> = right.iter().map(|p| invert_perm(p)).collect();
        let mut parent = vec![(u32::MAX, 0i32); n];
        let mut dist = vec![u32::MAX; n];
        parent[0] = (0, 0);
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in 0..right.len() {
                for (perm, letter) in [(&right[g], g as i32 + 1), (&right_inv[g], -(g as i32) - 1)] {
                    let f = perm[e] as usize;
                    if dist[f] == u32::MAX {
                        dist[f] = dist[e] + 1;
                        parent[f] = (e as u32, letter);
                        queue.push_back(f);
                    }
                }
            }
        }
        if dist.contains(&u32::MAX) {
            return Err(GroupError::InvalidTable("generators do not reach every element".into()));
        }
        let t = Self {
            right,
            right_inv,
            parent,
            dist,
        };
        t.check_axioms()?;
        Ok(t)
    }

    /// The permutation group generated by `images` on `0..degree`, as an abstract group.
    pub fn from_permutations(degree: usize, images: &[Vec<usize>]) -> Result<Self, GroupError> {
        let id: Vec<usize> = (0..degree).collect();
        let mut index: HashMap<Vec<usize>, u32> = HashMap::from([(id.clone(), 0)]);
        let mut elems = vec![id];
        let mut right: Vec<Vec<u32>> = vec![Vec::new(); images.len()];
        let mut i = 0;
        while i < elems.len() {
            for (g, img) in images.iter().enumerate() {
                if img.len() != degree {
                    return Err(GroupError::InvalidTable("image has the wrong degree".into()));
                }
                // apply elems[i] first, then the generator
                let prod: Vec<usize> = elems[i].iter().map(|&x| img[x]).collect();
                let next = elems.len() as u32;
                let j = *index.entry(prod.clone()).or_insert_with(|| {
                    elems.push(prod);
                    next
                });
                right[g].push(j);
            }
            i += 1;
        }
        Self::from_right_action(right)
    }

    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1);
        let cycle: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        Self::from_permutations(m, &[cycle]).expect("cyclic groups are groups")
    }

    /// `S_n` generated by `(0 1)` and `(0 1 ... n-1)`.
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        let mut swap: Vec<usize> = (0..n).collect();
        if n > 1 {
            swap.swap(0, 1);
        }
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(n, &[swap, cycle]).expect("symmetric groups are groups")
    }

    /// From a full Cayley table with identity `0` and chosen generators.
    pub fn from_multiplication(table: &[Vec<usize>], generator_images: &[usize]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::InvalidTable("table is not square over 0..order".into()));
        }
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(GroupError::InvalidTable("0 is not the identity".into()));
            }
            if !(0..n).any(|b| table[a][b] == 0) {
                return Err(GroupError::InvalidTable(format!("{a} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::InvalidTable(format!("({a}{b}){c} != {a}({b}{c})")));
                    }
                }
            }
        }
        if generator_images.iter().any(|&g| g >= n) {
            return Err(GroupError::InvalidTable("generator image out of range".into()));
        }
        let right = generator_images
            .iter()
            .map(|&g| (0..n).map(|e| table[e][g] as u32).collect())
            .collect();
        Self::from_right_action(right)
    }

    fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order();
        let mut triples: Vec<(usize, usize, usize)> = Vec::new();
        if n <= FULL_CHECK_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        triples.push((a, b, c));
                    }
                }
            }
        } else {
            let mut s: u64 = 0x9E37_79B9_7F4A_7C15;
            let mut next = || {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                (s % n as u64) as usize
            };
            for _ in 0..SPOT_CHECKS {
                triples.push((next(), next(), next()));
            }
        }
        for (a, b, c) in triples {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(GroupError::InvalidTable(format!("({a}{b}){c} != {a}({b}{c})")));
            }
        }
        let step = (n / SPOT_CHECKS).max(1);
        for a in (0..n).step_by(step) {
            let inv = self.inverse(a);
            if self.mul(a, inv) != 0 || self.mul(inv, a) != 0 {
                return Err(GroupError::InvalidTable(format!("{a} has no two-sided inverse")));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.dist.len()
    }

    pub fn generator_count(&self) -> usize {
        self.right.len()
    }

    /// Element index of each generator.
    pub fn generator_images(&self) -> Vec<usize> {
        self.right.iter().map(|p| p[0] as usize).collect()
    }

    fn apply(&self, e: usize, letter: i32) -> usize {
        let g = letter.unsigned_abs() as usize - 1;
        if letter > 0 {
            self.right[g][e] as usize
        } else {
            self.right_inv[g][e] as usize
        }
    }

    /// A shortest word for `e`.
    pub fn word(&self, e: usize) -> Word {
        let mut letters = Vec::with_capacity(self.dist[e] as usize);
        let mut x = e;
        while x != 0 {
            let (p, l) = self.parent[x];
            letters.push(l);
            x = p as usize;
        }
        letters.reverse();
        Word::new(letters).expect("tree letters are nonzero")
    }

    pub fn word_length(&self, e: usize) -> usize {
        self.dist[e] as usize
    }

    /// Evaluates a word starting from element `start`.
    pub fn apply_word(&self, start: usize, w: &Word) -> usize {
        w.letters().iter().fold(start, |e, &l| self.apply(e, l))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.apply_word(a, &self.word(b))
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.apply_word(0, &self.word(a).inverse())
    }

    /// The full `order x order` Cayley table.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Conjugacy class index of every element, numbered by first appearance.
    pub fn conjugacy_classes(&self) -> Vec<usize> {
        let n = self.order();
        let ginv: Vec<usize> = (0..self.generator_count())
            .map(|g| self.right_inv[g][0] as usize)
            .collect();
        let mut class = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if class[start] != usize::MAX {
                continue;
            }
            class[start] = next;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for (g, &gi) in ginv.iter().enumerate() {
                    let y = self.right[g][self.mul(gi, x)] as usize;
                    if class[y] == usize::MAX {
                        class[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        class
    }

    pub fn class_count(&self) -> usize {
        self.conjugacy_classes().into_iter().max().map_or(0, |m| m + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_three() {
        let s3 = FiniteGroupTable::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.class_count(), 3);
        let t = s3.multiplication_table();
        let back = FiniteGroupTable::from_multiplication(&t, &s3.generator_images()).unwrap();
        assert_eq!(back.order(), 6);
    }

    #[test]
    fn class_counts_match_partitions() {
        // p(n) classes in S_n
        for (n, p) in [(1, 1), (2, 2), (4, 5), (5, 7)] {
            assert_eq!(FiniteGroupTable::symmetric(n).class_count(), p);
        }
        assert_eq!(FiniteGroupTable::cyclic(7).class_count(), 7);
    }

    #[test]
    fn inverse_and_words() {
        let g = FiniteGroupTable::symmetric(4);
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inverse(a)), 0);
            assert_eq!(g.apply_word(0, &g.word(a)), a);
            assert_eq!(g.word(a).len(), g.word_length(a));
        }
    }

    #[test]
    fn rejects_non_groups() {
        // Schreier graph of S_3 acting on three points: transitive but not regular
        let swap = vec![1, 0, 2];
        let cycle = vec![1, 2, 0];
        assert!(FiniteGroupTable::from_right_action(vec![swap, cycle]).is_err());
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroupTable::from_multiplication(&bad, &[1]).is_err());
        assert!(FiniteGroupTable::from_right_action(vec![vec![0, 0]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroupTable::symmetric(3);
        let s = serde_json::to_string(&g).unwrap();
        let back: FiniteGroupTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
