use serde::{Deserialize, Serialize};

use super::finite::FiniteGroupTable;
use super::word::{Presentation, Word};
use super::GroupError;

pub const MAX_QUOTIENT_DEGREE: usize = 6;

type Perm = [u8; MAX_QUOTIENT_DEGREE];

/// Generator images in `S_degree` (0-based points) satisfying every relator,
/// with at least one image different from the identity.
///
/// Words act on the right: `ab` sends `x` to `b(a(x))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationWitness {
    pub degree: usize,
    pub images: Vec<Vec<usize>>,
}

fn is_perm(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

impl PermutationWitness {
    /// Evaluates `w` as a permutation.
    pub fn evaluate(&self, w: &Word) -> Vec<usize> {
        let n = self.degree;
        let inverses: Vec<Vec<usize>> = self
            .images
            .iter()
            .map(|p| {
                let mut inv = vec![0; n];
                for (i, &x) in p.iter().enumerate() {
                    inv[x] = i;
                }
                inv
            })
            .collect();
        (0..n)
            .map(|x| {
                w.letters().iter().fold(x, |y, &l| {
                    let g = l.unsigned_abs() as usize - 1;
                    if l > 0 {
                        self.images[g][y]
                    } else {
                        inverses[g][y]
                    }
                })
            })
            .collect()
    }

    /// Independent recheck against a presentation.
    pub fn verify(&self, p: &Presentation) -> bool {
        let n = self.degree;
        let id: Vec<usize> = (0..n).collect();
        self.images.len() == p.generator_count()
            && self.images.iter().all(|img| is_perm(img, n))
            && self.images.iter().any(|img| *img != id)
            && p.relators().iter().all(|r| self.evaluate(r) == id)
    }

    /// The image subgroup of `S_degree`.
    pub fn image(&self) -> Result<FiniteGroupTable, GroupError> {
        FiniteGroupTable::from_permutations(self.degree, &self.images)
    }

    /// Whether every image is an even permutation.
    pub fn is_even(&self) -> bool {
        self.images.iter().all(|img| {
            let mut seen = vec![false; img.len()];
            let mut transpositions = 0;
            for s in 0..img.len() {
                let mut x = s;
                let mut len = 0;
                while !seen[x] {
                    seen[x] = true;
                    x = img[x];
                    len += 1;
                }
                if len > 0 {
                    transpositions += len - 1;
                }
            }
            transpositions % 2 == 0
        })
    }
}

struct Symmetric {
    n: usize,
    perms: Vec<Perm>,
    inverse: Vec<usize>,
    /// Identity first, then one element per nontrivial cycle type.
    class_reps: Vec<usize>,
    mul: Vec<u16>,
}

fn permutations(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(n);
    let mut used = [false; MAX_QUOTIENT_DEGREE];
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut [bool; MAX_QUOTIENT_DEGREE], out: &mut Vec<Perm>) {
        if cur.len() == n {
            let mut p: Perm = [0; MAX_QUOTIENT_DEGREE];
            for (i, slot) in p.iter_mut().enumerate() {
                *slot = if i < n { cur[i] } else { i as u8 };
            }
            out.push(p);
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

fn cycle_type(p: &Perm, n: usize) -> Vec<usize> {
    let mut seen = [false; MAX_QUOTIENT_DEGREE];
    let mut lens = Vec::new();
    for s in 0..n {
        let mut x = s;
        let mut len = 0;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        if len > 0 {
            lens.push(len);
        }
    }
    lens.sort_unstable();
    lens
}

impl Symmetric {
    fn new(n: usize) -> Self {
        let perms = permutations(n);
        let m = perms.len();
        let index = |p: &Perm| perms.binary_search(p).expect("all permutations listed");
        let mut mul = vec![0u16; m * m];
        for a in 0..m {
            for b in 0..m {
                let mut c: Perm = [0; MAX_QUOTIENT_DEGREE];
                for (x, slot) in c.iter_mut().enumerate() {
                    *slot = perms[b][perms[a][x] as usize];
                }
                mul[a * m + b] = index(&c) as u16;
            }
        }
        let inverse = (0..m)
            .map(|a| (0..m).find(|&b| mul[a * m + b] == 0).expect("groups have inverses"))
            .collect();
        let mut seen_types = Vec::new();
        let mut class_reps = Vec::new();
        for (i, p) in perms.iter().enumerate() {
            let t = cycle_type(p, n);
            if !seen_types.contains(&t) {
                seen_types.push(t);
                class_reps.push(i);
            }
        }
        Self {
            n,
            perms,
            inverse,
            class_reps,
            mul,
        }
    }

    fn eval(&self, w: &Word, assigned: &[usize]) -> usize {
        let m = self.perms.len();
        w.letters().iter().fold(0usize, |acc, &l| {
            let g = assigned[l.unsigned_abs() as usize - 1];
            let x = if l > 0 { g } else { self.inverse[g] };
            self.mul[acc * m + x] as usize
        })
    }
}

struct Search<'a> {
    sym: &'a Symmetric,
    k: usize,
    /// Relators grouped by the largest generator they mention.
    checks: Vec<Vec<Word>>,
}

impl Search<'_> {
    fn dfs(&self, assigned: &mut Vec<usize>, nontrivial: bool) -> bool {
        let depth = assigned.len();
        if depth == self.k {
            return nontrivial;
        }
        let all: Vec<usize>;
        let candidates: &[usize] = if nontrivial {
            all = (0..self.sym.perms.len()).collect();
            &all
        } else {
            // the first nontrivial image can be conjugated to a class representative
            &self.sym.class_reps
        };
        for &c in candidates {
            assigned.push(c);
            let ok = self.checks[depth].iter().all(|r| self.sym.eval(r, assigned) == 0);
            if ok && self.dfs(assigned, nontrivial || c != 0) {
                return true;
            }
            assigned.pop();
        }
        false
    }
}

/// Exhaustive search for a homomorphism onto a nontrivial subgroup of
/// `S_n`, `2 <= n <= max_degree`, smallest degree first.
pub fn search_nontrivial_quotient(
    p: &Presentation,
    max_degree: usize,
) -> Result<Option<PermutationWitness>, GroupError> {
    if max_degree > MAX_QUOTIENT_DEGREE {
        return Err(GroupError::DegreeOutOfRange(max_degree));
    }
    let k = p.generator_count();
    let mut checks: Vec<Vec<Word>> = vec![Vec::new(); k];
    for r in p.relators() {
        if !r.is_empty() {
            checks[r.max_generator() - 1].push(r.clone());
        }
    }
    for n in 2..=max_degree {
        let sym = Symmetric::new(n);
        let search = Search {
            sym: &sym,
            k,
            checks: checks.clone(),
        };
        let mut assigned = Vec::with_capacity(k);
        if search.dfs(&mut assigned, false) {
            let images = assigned
                .iter()
                .map(|&i| sym.perms[i][..sym.n].iter().map(|&x| x as usize).collect())
                .collect();
            return Ok(Some(PermutationWitness { degree: n, images }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{catalog, free_product_all};

    #[test]
    fn killed_generator_has_no_quotient() {
        let p = Presentation::parse(1, &["a"]).unwrap();
        assert_eq!(search_nontrivial_quotient(&p, 6).unwrap(), None);
        assert_eq!(search_nontrivial_quotient(&Presentation::trivial(), 6).unwrap(), None);
    }

    #[test]
    fn free_cyclic_maps_to_transposition() {
        let w = search_nontrivial_quotient(&Presentation::free(1), 5).unwrap().unwrap();
        assert_eq!(w, PermutationWitness { degree: 2, images: vec![vec![1, 0]] });
    }

    #[test]
    fn binary_icosahedral_onto_a5() {
        let p = catalog::binary_icosahedral();
        let w = search_nontrivial_quotient(&p, 5).unwrap().unwrap();
        assert_eq!(w.degree, 5);
        assert!(w.verify(&p));
        assert!(w.is_even());
        assert_eq!(w.image().unwrap().order(), 60);
        assert_eq!(search_nontrivial_quotient(&p, 4).unwrap(), None);
    }

    #[test]
    fn triple_free_product_keeps_witness() {
        let p = catalog::binary_icosahedral();
        let ppp = free_product_all(&[p.clone(), p.clone(), p]);
        let w = search_nontrivial_quotient(&ppp, 5).unwrap().unwrap();
        assert!(w.verify(&ppp));
        assert_eq!(w.image().unwrap().order(), 60);
    }

    #[test]
    fn trivial_groups_have_no_witness() {
        let p = catalog::two_generator_trivial();
        assert_eq!(search_nontrivial_quotient(&p, 5).unwrap(), None);
        assert!(search_nontrivial_quotient(&p, 7).is_err());
    }
}
