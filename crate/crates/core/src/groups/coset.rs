use super::finite::FiniteGroupTable;
use super::word::Presentation;
use super::GroupError;

pub const DEFAULT_MAX_COSETS: usize = 100_000;

const NONE: u32 = u32::MAX;

/// Coset table over the trivial subgroup, HLT order with immediate
/// coincidence processing. Column `2g` is generator `g`, `2g + 1` its inverse.
struct CosetTable {
    cols: usize,
    table: Vec<u32>,
    forward: Vec<u32>,
    live: usize,
    budget: usize,
    defined_limit: usize,
}

fn inv_col(x: usize) -> usize {
    x ^ 1
}

fn col_of(letter: i32) -> usize {
    let g = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

impl CosetTable {
    fn new(generators: usize, budget: usize) -> Self {
        let cols = 2 * generators;
        Self {
            cols,
            table: vec![NONE; cols],
            forward: vec![0],
            live: 1,
            budget,
            // dead cosets still hold rows; cap memory as well as live count
            defined_limit: budget.saturating_mul(8).max(64),
        }
    }

    fn get(&self, c: usize, x: usize) -> u32 {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, v: u32) {
        self.table[c * self.cols + x] = v;
    }

    fn is_live(&self, c: usize) -> bool {
        self.forward[c] as usize == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), GroupError> {
        if self.live >= self.budget || self.forward.len() >= self.defined_limit {
            return Err(GroupError::Exceeded { budget: self.budget });
        }
        let d = self.forward.len();
        self.forward.push(d as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.live += 1;
        self.set(c, x, d as u32);
        self.set(d, inv_col(x), c as u32);
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.forward[r] as usize != r {
            r = self.forward[r] as usize;
        }
        let mut x = c;
        while self.forward[x] as usize != r {
            let next = self.forward[x] as usize;
            self.forward[x] = r as u32;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.forward[hi] = lo as u32;
            self.live -= 1;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                let f = f as usize;
                self.set(f, inv_col(x), NONE);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.get(e1, x);
                let fx = self.get(f1, inv_col(x));
                if ex != NONE {
                    self.merge(f1, ex as usize, &mut queue);
                } else if fx != NONE {
                    self.merge(e1, fx as usize, &mut queue);
                } else {
                    self.set(e1, x, f1 as u32);
                    self.set(f1, inv_col(x), e1 as u32);
                }
            }
        }
    }

    /// Traces `word` from `c` forwards and backwards, defining cosets to close the gap.
    fn scan_and_fill(&mut self, c: usize, word: &[usize]) -> Result<(), GroupError> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i: isize = 0;
        let mut j: isize = word.len() as isize - 1;
        loop {
            while i <= j && self.get(f, word[i as usize]) != NONE {
                f = self.get(f, word[i as usize]) as usize;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.get(b, inv_col(word[j as usize])) != NONE {
                b = self.get(b, inv_col(word[j as usize])) as usize;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            let x = word[i as usize];
            if i == j {
                self.set(f, x, b as u32);
                self.set(b, inv_col(x), f as u32);
                return Ok(());
            }
            self.define(f, x)?;
        }
    }
}

/// Enumerates the cosets of the trivial subgroup, i.e. the elements of the
/// presented group, giving up once more than `budget` cosets are alive.
pub fn todd_coxeter(p: &Presentation, budget: usize) -> Result<FiniteGroupTable, GroupError> {
    if budget == 0 {
        return Err(GroupError::InvalidBudget);
    }
    let k = p.generator_count();
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| r.letters().iter().map(|&l| col_of(l)).collect())
        .collect();
    let mut t = CosetTable::new(k, budget);
    let mut c = 0;
    while c < t.forward.len() {
        if t.is_live(c) {
            for r in &relators {
                if !t.is_live(c) {
                    break;
                }
                t.scan_and_fill(c, r)?;
            }
            for x in 0..t.cols {
                if !t.is_live(c) {
                    break;
                }
                if t.get(c, x) == NONE {
                    t.define(c, x)?;
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..t.forward.len()).filter(|&c| t.is_live(c)).collect();
    let mut index = vec![u32::MAX; t.forward.len()];
    for (i, &c) in live.iter().enumerate() {
        index[c] = i as u32;
    }
    let right: Vec<Vec<u32>> = (0..k)
        .map(|g| live.iter().map(|&c| index[t.get(c, 2 * g) as usize]).collect())
        .collect();
    FiniteGroupTable::from_right_action(right)
}
