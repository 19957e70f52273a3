use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::finite::FiniteGroupTable;
use super::GroupError;
use crate::fds::{log_slope, GrowthRate};

const MAX_TABLE_RADIUS: usize = 10_000;
const MAX_FREE_RADIUS: usize = 1_000;
const MAX_PRODUCT_RADIUS: usize = 200;

/// Groups whose conjugacy growth is computed exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GroupClass {
    Trivial,
    Finite { table: FiniteGroupTable },
    FreeAbelian { rank: usize },
    Free { rank: usize },
    /// At least two factors, none trivial.
    FreeProduct { factors: Vec<GroupClass> },
}

impl GroupClass {
    pub fn cyclic(m: usize) -> Self {
        Self::Finite {
            table: FiniteGroupTable::cyclic(m),
        }
    }

    pub fn symmetric(n: usize) -> Self {
        Self::Finite {
            table: FiniteGroupTable::symmetric(n),
        }
    }

    pub fn free_product(factors: Vec<GroupClass>) -> Result<Self, GroupError> {
        let g = Self::FreeProduct { factors };
        g.validate()?;
        Ok(g)
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Self::Trivial => true,
            Self::Finite { table } => table.order() == 1,
            Self::FreeAbelian { rank } | Self::Free { rank } => *rank == 0,
            Self::FreeProduct { factors } => factors.iter().all(GroupClass::is_trivial),
        }
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if let Self::FreeProduct { factors } = self {
            if factors.len() < 2 {
                return Err(GroupError::UnsupportedClass("free product needs two factors".into()));
            }
            if factors.iter().any(GroupClass::is_trivial) {
                return Err(GroupError::UnsupportedClass("trivial free factor".into()));
            }
            for f in factors {
                f.validate()?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Trivial => f.write_str("trivial"),
            Self::Finite { table } => write!(f, "finite:{}", table.order()),
            Self::FreeAbelian { rank } => write!(f, "free_abelian:{rank}"),
            Self::Free { rank } => write!(f, "free:{rank}"),
            Self::FreeProduct { factors } => {
                let parts: Vec<String> = factors.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join("*"))
            }
        }
    }
}

/// `trivial`, `cyclic:m`, `symmetric:n`, `free:k`, `free_abelian:n`, joined by `*`
/// for free products.
impl FromStr for GroupClass {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let atoms: Vec<&str> = s.split('*').map(str::trim).collect();
        let parse_atom = |a: &str| -> Result<GroupClass, GroupError> {
            let bad = || GroupError::InvalidClass(a.to_string());
            if a == "trivial" {
                return Ok(GroupClass::Trivial);
            }
            let (name, arg) = a.split_once(':').ok_or_else(bad)?;
            let n: usize = arg.trim().parse().map_err(|_| bad())?;
            match name.trim() {
                "cyclic" | "z" if n >= 1 => Ok(GroupClass::cyclic(n)),
                "symmetric" | "s" if (1..=7).contains(&n) => Ok(GroupClass::symmetric(n)),
                "free" | "f" => Ok(GroupClass::Free { rank: n }),
                "free_abelian" | "zn" => Ok(GroupClass::FreeAbelian { rank: n }),
                _ => Err(bad()),
            }
        };
        if atoms.len() == 1 {
            return parse_atom(atoms[0]);
        }
        let factors = atoms.into_iter().map(parse_atom).collect::<Result<Vec<_>, _>>()?;
        GroupClass::free_product(factors)
    }
}

/// `counts[x]` is the number of conjugacy classes meeting the ball of radius `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjGrowthTable {
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub counts: Vec<BigInt>,
}

impl ConjGrowthTable {
    pub fn x_max(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, x: usize) -> &BigInt {
        &self.counts[x]
    }

    /// Least-squares slope of `log f` against `log x` on `[x_max / 2, x_max]`.
    pub fn slope(&self) -> f64 {
        table_slope(self)
    }
}

pub fn table_slope(t: &ConjGrowthTable) -> f64 {
    let hi = t.x_max();
    let lo = (hi / 2).max(1);
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|x| ((x as f64).ln(), t.counts[x].to_f64().unwrap_or(f64::INFINITY).ln()))
        .collect();
    log_slope(&pts)
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count()
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn check_radius(x: usize, limit: usize) -> Result<(), GroupError> {
    if x > limit {
        Err(GroupError::RadiusTooLarge { radius: x, limit })
    } else {
        Ok(())
    }
}

/// Lattice points of `Z^n` with l1 norm at most `x`.
fn l1_ball(n: usize, x: usize) -> BigInt {
    (0..=n.min(x))
        .map(|k| (BigInt::one() << k) * binomial(n, k) * binomial(x, k))
        .sum()
}

fn cumulative(per_length: Vec<BigInt>) -> Vec<BigInt> {
    let mut total = BigInt::zero();
    per_length
        .into_iter()
        .map(|c| {
            total += c;
            total.clone()
        })
        .collect()
}

/// Conjugacy classes of the free group of rank `k`, by cyclically reduced length,
/// counted as necklaces by Burnside's lemma.
fn free_group_counts(k: usize, x: usize) -> Vec<BigInt> {
    let base = BigInt::from(2 * k - 1);
    // cyclically reduced words of length L
    let c = |l: usize| -> BigInt {
        let parity = if l.is_multiple_of(2) { 2 * (k - 1) } else { 0 };
        base.pow(l as u32) + BigInt::one() + BigInt::from(parity)
    };
    let mut per_length = vec![BigInt::one()];
    for l in 1..=x {
        let fixed: BigInt = divisors(l)
            .into_iter()
            .map(|d| BigInt::from(euler_phi(l / d)) * c(d))
            .sum();
        per_length.push(fixed / BigInt::from(l));
    }
    cumulative(per_length)
}

/// Shortest word length in each conjugacy class; the identity's class comes first.
fn class_lengths(t: &FiniteGroupTable) -> Vec<usize> {
    let class = t.conjugacy_classes();
    let classes = class.iter().max().map_or(0, |m| m + 1);
    let mut shortest = vec![usize::MAX; classes];
    for (e, &c) in class.iter().enumerate() {
        shortest[c] = shortest[c].min(t.word_length(e));
    }
    shortest
}

fn finite_counts(t: &FiniteGroupTable, x: usize) -> Vec<BigInt> {
    let shortest = class_lengths(t);
    (0..=x)
        .map(|r| BigInt::from(shortest.iter().filter(|&&s| s <= r).count()))
        .collect()
}

type Poly = Vec<BigInt>;

fn poly_mul(a: &Poly, b: &Poly, deg: usize) -> Poly {
    let mut out = vec![BigInt::zero(); deg + 1];
    for (i, ai) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, bj) in b.iter().enumerate().take(deg + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// Free products of finite groups. A conjugacy class of a cyclically reduced
/// element with two or more syllables is its set of syllable rotations, so
/// classes are necklaces of syllables whose neighbours (cyclically) lie in
/// different factors. Walks are counted with a transfer matrix and
/// rotations are quotiented by Burnside's lemma.
fn free_product_counts(factors: &[FiniteGroupTable], x: usize) -> Vec<BigInt> {
    let r = factors.len();
    // syllable generating function per factor
    let syllable: Vec<Poly> = factors
        .iter()
        .map(|t| {
            let mut p = vec![BigInt::zero(); x + 1];
            for e in 1..t.order() {
                let l = t.word_length(e);
                if l <= x {
                    p[l] += 1;
                }
            }
            p
        })
        .collect();
    let step: Vec<Vec<Poly>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { vec![BigInt::zero(); x + 1] } else { syllable[j].clone() })
                .collect()
        })
        .collect();
    // traces[d] = tr(M^d), truncated at degree x
    let mut traces: Vec<Poly> = vec![vec![BigInt::zero(); x + 1]; x + 1];
    let mut power = step.clone();
    for d in 1..=x {
        if d > 1 {
            let mut next = vec![vec![vec![BigInt::zero(); x + 1]; r]; r];
            for i in 0..r {
                for j in 0..r {
                    for m in 0..r {
                        let prod = poly_mul(&power[i][m], &step[m][j], x);
                        for (acc, v) in next[i][j].iter_mut().zip(prod) {
                            *acc += v;
                        }
                    }
                }
            }
            power = next;
        }
        for i in 0..r {
            for (acc, v) in traces[d].iter_mut().zip(&power[i][i]) {
                *acc += v;
            }
        }
    }
    let single: Vec<Vec<usize>> = factors.iter().map(class_lengths).collect();
    let mut per_length = vec![BigInt::one()];
    for l in 1..=x {
        let mut total = BigInt::zero();
        // single syllables: nontrivial classes of a factor
        for shortest in &single {
            total += shortest.iter().skip(1).filter(|&&s| s == l).count();
        }
        for s in 2..=l {
            let mut fixed = BigInt::zero();
            for d in divisors(s) {
                if (l * d) % s == 0 {
                    fixed += BigInt::from(euler_phi(s / d)) * &traces[d][l * d / s];
                }
            }
            total += fixed / BigInt::from(s);
        }
        per_length.push(total);
    }
    cumulative(per_length)
}

/// Exact conjugacy counts for `0 <= x <= x_max` in the class's standard generators.
pub fn conjugacy_count(g: &GroupClass, x_max: usize) -> Result<ConjGrowthTable, GroupError> {
    g.validate()?;
    check_radius(x_max, MAX_TABLE_RADIUS)?;
    let counts = match g {
        GroupClass::Trivial => vec![BigInt::one(); x_max + 1],
        GroupClass::FreeAbelian { rank } => (0..=x_max).map(|x| l1_ball(*rank, x)).collect(),
        GroupClass::Free { rank: 0 } => vec![BigInt::one(); x_max + 1],
        GroupClass::Free { rank } => {
            check_radius(x_max, MAX_FREE_RADIUS)?;
            free_group_counts(*rank, x_max)
        }
        GroupClass::Finite { table } => finite_counts(table, x_max),
        GroupClass::FreeProduct { factors } => {
            check_radius(x_max, MAX_PRODUCT_RADIUS)?;
            let tables = factors
                .iter()
                .map(|f| match f {
                    GroupClass::Finite { table } => Ok(table.clone()),
                    other => Err(GroupError::UnsupportedClass(format!(
                        "free product factor {other} is not finite"
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            free_product_counts(&tables, x_max)
        }
    };
    Ok(ConjGrowthTable { counts })
}

fn order_two(g: &GroupClass) -> bool {
    matches!(g, GroupClass::Finite { table } if table.order() == 2)
}

/// Closed-form conjugacy growth rate.
pub fn conjugacy_growth_rate(g: &GroupClass) -> Result<GrowthRate, GroupError> {
    g.validate()?;
    Ok(match g {
        GroupClass::Trivial | GroupClass::Finite { .. } => GrowthRate::zero(),
        GroupClass::FreeAbelian { rank } => GrowthRate::integer(*rank as i64),
        GroupClass::Free { rank } => match rank {
            0 => GrowthRate::zero(),
            1 => GrowthRate::integer(1),
            _ => GrowthRate::Infinity,
        },
        // the infinite dihedral group is the only free product without a free subgroup of rank two
        GroupClass::FreeProduct { factors } if factors.len() == 2 && factors.iter().all(order_two) => {
            GrowthRate::integer(1)
        }
        GroupClass::FreeProduct { .. } => GrowthRate::Infinity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn counts(g: &GroupClass, x: usize) -> Vec<u64> {
        conjugacy_count(g, x)
            .unwrap()
            .counts
            .iter()
            .map(|c| c.to_u64().unwrap())
            .collect()
    }

    /// Reduced words up to length `x`, cyclically reduced, canonical rotation.
    fn free_group_oracle(k: i32, x: usize) -> Vec<u64> {
        let mut words: Vec<Vec<i32>> = vec![vec![]];
        let mut all = vec![vec![]];
        for _ in 0..x {
            let mut next = Vec::new();
            for w in &words {
                for g in (1..=k).flat_map(|g| [g, -g]) {
                    if w.last() != Some(&-g) {
                        let mut v = w.clone();
                        v.push(g);
                        next.push(v);
                    }
                }
            }
            all.extend(next.iter().cloned());
            words = next;
        }
        let canon = |w: &Vec<i32>| {
            let mut v = w.clone();
            while v.len() > 1 && v[0] == -v[v.len() - 1] {
                v.remove(0);
                v.pop();
            }
            (0..v.len().max(1))
                .map(|r| {
                    let mut u = v.clone();
                    if !u.is_empty() {
                        u.rotate_left(r);
                    }
                    u
                })
                .min()
                .unwrap()
        };
        (0..=x)
            .map(|r| {
                all.iter()
                    .filter(|w| w.len() <= r)
                    .map(canon)
                    .collect::<HashSet<_>>()
                    .len() as u64
            })
            .collect()
    }

    /// Normal forms of a free product of cyclic groups; syllables are `(factor, exponent)`.
    fn cyclic_product_oracle(orders: &[usize], x: usize) -> Vec<u64> {
        let len = |f: usize, e: usize| e.min(orders[f] - e);
        let mut forms: Vec<Vec<(usize, usize)>> = vec![vec![]];
        let mut frontier = vec![vec![]];
        loop {
            let mut next = Vec::new();
            for w in &frontier {
                let wl: usize = w.iter().map(|&(f, e)| len(f, e)).sum();
                for (f, &m) in orders.iter().enumerate() {
                    if w.last().map(|s: &(usize, usize)| s.0) == Some(f) {
                        continue;
                    }
                    for e in 1..m {
                        if wl + len(f, e) <= x {
                            let mut v = w.clone();
                            v.push((f, e));
                            next.push(v);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            forms.extend(next.iter().cloned());
            frontier = next;
        }
        let canon = |w: &Vec<(usize, usize)>| {
            let mut v = w.clone();
            // cyclic reduction: merge or cancel first and last syllables of the same factor
            while v.len() > 1 && v[0].0 == v[v.len() - 1].0 {
                let f = v[0].0;
                let e = (v[0].1 + v[v.len() - 1].1) % orders[f];
                v.remove(0);
                v.pop();
                if e != 0 {
                    v.push((f, e));
                }
            }
            (0..v.len().max(1))
                .map(|r| {
                    let mut u = v.clone();
                    if !u.is_empty() {
                        u.rotate_left(r);
                    }
                    u
                })
                .min()
                .unwrap()
        };
        let weight = |w: &Vec<(usize, usize)>| -> usize { w.iter().map(|&(f, e)| len(f, e)).sum() };
        (0..=x)
            .map(|r| {
                forms
                    .iter()
                    .filter(|w| weight(w) <= r)
                    .map(canon)
                    .collect::<HashSet<_>>()
                    .len() as u64
            })
            .collect()
    }

    #[test]
    fn trivial_is_constant() {
        assert_eq!(counts(&GroupClass::Trivial, 5), vec![1; 6]);
    }

    #[test]
    fn integers() {
        assert_eq!(counts(&GroupClass::FreeAbelian { rank: 1 }, 3)[3], 7);
    }

    #[test]
    fn free_group_rank_two() {
        let c = counts(&GroupClass::Free { rank: 2 }, 2);
        assert_eq!(c, vec![1, 5, 13]);
        assert_eq!(counts(&GroupClass::Free { rank: 2 }, 7), free_group_oracle(2, 7));
        assert_eq!(counts(&GroupClass::Free { rank: 3 }, 4), free_group_oracle(3, 4));
        assert_eq!(counts(&GroupClass::Free { rank: 1 }, 6), free_group_oracle(1, 6));
    }

    #[test]
    fn symmetric_three_stabilizes() {
        let c = counts(&GroupClass::symmetric(3), 6);
        assert_eq!(*c.last().unwrap(), 3);
        assert_eq!(c[0], 1);
    }

    #[test]
    fn cyclic_free_products_match_normal_forms() {
        for orders in [vec![2, 2], vec![2, 3], vec![2, 2, 2], vec![3, 4], vec![5, 2]] {
            let g: GroupClass = orders
                .iter()
                .map(|m| format!("cyclic:{m}"))
                .collect::<Vec<_>>()
                .join("*")
                .parse()
                .unwrap();
            assert_eq!(counts(&g, 9), cyclic_product_oracle(&orders, 9), "{orders:?}");
        }
    }

    #[test]
    fn closed_forms() {
        let rate = |s: &str| conjugacy_growth_rate(&s.parse().unwrap()).unwrap();
        assert_eq!(rate("free_abelian:2"), GrowthRate::integer(2));
        assert_eq!(rate("symmetric:3"), GrowthRate::zero());
        assert_eq!(rate("cyclic:2*cyclic:2*cyclic:2"), GrowthRate::Infinity);
        assert_eq!(rate("cyclic:2*cyclic:2"), GrowthRate::integer(1));
        assert_eq!(rate("free:1"), GrowthRate::integer(1));
        assert_eq!(rate("free:2"), GrowthRate::Infinity);
        assert!("cyclic:2*trivial".parse::<GroupClass>().is_err());
    }

    #[test]
    fn slopes_follow_rates() {
        for n in 1..=3 {
            let t = conjugacy_count(&GroupClass::FreeAbelian { rank: n }, 40).unwrap();
            assert!((t.slope() - n as f64).abs() < 0.15, "n={n} slope {}", t.slope());
        }
        // f(x) = 3 + floor(x / 2): the offset needs a longer window
        let dihedral = conjugacy_count(&"cyclic:2*cyclic:2".parse().unwrap(), 200).unwrap();
        assert_eq!(dihedral.get(40).to_u64(), Some(23));
        assert!((dihedral.slope() - 1.0).abs() < 0.15);
    }

    #[test]
    fn unsupported_and_limits() {
        let g: GroupClass = "free:1*cyclic:2".parse().unwrap();
        assert!(matches!(conjugacy_count(&g, 3), Err(GroupError::UnsupportedClass(_))));
        assert!(matches!(
            conjugacy_count(&GroupClass::Free { rank: 2 }, 5000),
            Err(GroupError::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let g: GroupClass = "cyclic:2*free_abelian:1".parse().unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.starts_with("{\"class\":\"free_product\""));
        assert_eq!(serde_json::from_str::<GroupClass>(&s).unwrap(), g);
    }
}
