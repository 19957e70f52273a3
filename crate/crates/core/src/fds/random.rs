//! Seeded generators of random systems, used by tests, benchmarks and the
//! command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use super::{ConcreteFds, ExactTriangle};
use crate::exactalg::{ExactMatrix, Field};

/// Uniform field element: `0..p` for `F_p`, `-2..=2` for Q.
pub fn random_scalar<R: Rng>(rng: &mut R, field: Field) -> BigRational {
    let v = match field {
        Field::Prime(p) => rng.gen_range(0..i64::from(p)),
        Field::Rational => rng.gen_range(-2..=2),
    };
    field.from_i64(v)
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize) -> ExactMatrix {
    let entries = (0..rows * cols).map(|_| random_scalar(rng, field)).collect();
    ExactMatrix::new(field, rows, cols, entries).expect("entries already reduced")
}

/// Random invertible `n x n` matrix and its inverse.
pub fn random_invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> (ExactMatrix, ExactMatrix) {
    loop {
        let m = random_matrix(rng, field, n, n);
        if m.rank() == n {
            let inv = m
                .solve(&ExactMatrix::identity(field, n))
                .expect("square system")
                .expect("invertible");
            return (m, inv);
        }
    }
}

/// Strictly increasing grid starting at 1 with steps drawn from `1/4, 1/3, 1/2, 1`.
pub fn random_grid<R: Rng>(rng: &mut R, len: usize) -> Vec<BigRational> {
    let mut x = BigRational::one();
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(x.clone());
        let d = [4, 3, 2, 1][rng.gen_range(0..4)];
        x += BigRational::new(BigInt::one(), BigInt::from(d));
    }
    out
}

/// Stabilized system with random dimensions in `0..=max_dim` and random steps.
pub fn random_fds<R: Rng>(rng: &mut R, field: Field, grid: Vec<BigRational>, max_dim: usize) -> ConcreteFds {
    let dims: Vec<usize> = grid.iter().map(|_| rng.gen_range(0..=max_dim)).collect();
    let steps = dims
        .windows(2)
        .map(|w| random_matrix(rng, field, w[1], w[0]))
        .collect();
    ConcreteFds::new(field, grid, dims, steps, true).expect("shapes consistent")
}

/// Block matrix from a grid of optional blocks.
fn blocks(field: Field, rows: &[usize], cols: &[usize], parts: &[&[Option<&ExactMatrix>]]) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, rows.iter().sum(), cols.iter().sum());
    let mut r0 = 0;
    for (bi, row) in parts.iter().enumerate() {
        let mut c0 = 0;
        for (bj, blk) in row.iter().enumerate() {
            if let Some(b) = blk {
                debug_assert_eq!(b.shape(), (rows[bi], cols[bj]));
                m.paste(r0, c0, b);
            }
            c0 += cols[bj];
        }
        r0 += rows[bi];
    }
    m
}

fn conj(g_next: &ExactMatrix, m: &ExactMatrix, g_inv: &ExactMatrix) -> ExactMatrix {
    g_next.mul(m).and_then(|x| x.mul(g_inv)).expect("shapes consistent")
}

/// Random exact triangle whose third system dies after shift `C`.
///
/// At each point `V = I ⊕ R`, `V' = R ⊕ S`, `V'' = S ⊕ I`, with the triangle
/// maps projecting onto the shared summand. Structure maps are block upper
/// triangular, the third system never has two consecutive nonzero steps, and
/// the grid spacing makes every `C`-shift span at least two steps. The third
/// system vanishes at the last point and all three are stabilized. Each space
/// is then hit by an independent random change of basis.
pub fn random_exact_triangle<R: Rng>(rng: &mut R, field: Field, len: usize, max_block: usize) -> ExactTriangle {
    let mut grid = Vec::with_capacity(len);
    let mut x = BigRational::one();
    for _ in 0..len {
        grid.push(x.clone());
        let d = [4, 3, 2][rng.gen_range(0..3)];
        x += BigRational::new(BigInt::one(), BigInt::from(d));
    }
    let c = [
        BigRational::from_integer(2.into()),
        BigRational::new(5.into(), 2.into()),
        BigRational::from_integer(3.into()),
    ][rng.gen_range(0..3)]
    .clone();

    // the third system is zero at the last point, so all three may be
    // stabilized without reviving it in the tail
    let mut di: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_block)).collect();
    let dr: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_block)).collect();
    let mut ds: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_block)).collect();
    di[len - 1] = 0;
    ds[len - 1] = 0;

    let mut u_live = false;
    let mut sv = Vec::new();
    let mut sw = Vec::new();
    let mut su = Vec::new();
    for k in 0..len - 1 {
        let live = !u_live && rng.gen_bool(0.6);
        u_live = live;
        let rnd = |rng: &mut R, r: usize, c: usize| -> ExactMatrix {
            if live {
                random_matrix(rng, field, r, c)
            } else {
                ExactMatrix::zeros(field, r, c)
            }
        };
        let psi_i = rnd(rng, di[k + 1], di[k]);
        let psi_s = rnd(rng, ds[k + 1], ds[k]);
        let y = rnd(rng, ds[k + 1], di[k]);
        let psi_r = random_matrix(rng, field, dr[k + 1], dr[k]);
        let xm = random_matrix(rng, field, di[k + 1], dr[k]);
        let wm = random_matrix(rng, field, dr[k + 1], ds[k]);
        sv.push(blocks(
            field,
            &[di[k + 1], dr[k + 1]],
            &[di[k], dr[k]],
            &[&[Some(&psi_i), Some(&xm)], &[None, Some(&psi_r)]],
        ));
        sw.push(blocks(
            field,
            &[dr[k + 1], ds[k + 1]],
            &[dr[k], ds[k]],
            &[&[Some(&psi_r), Some(&wm)], &[None, Some(&psi_s)]],
        ));
        su.push(blocks(
            field,
            &[ds[k + 1], di[k + 1]],
            &[ds[k], di[k]],
            &[&[Some(&psi_s), Some(&y)], &[None, Some(&psi_i)]],
        ));
    }

    let mut a12 = Vec::new();
    let mut a23 = Vec::new();
    let mut a31 = Vec::new();
    for k in 0..len {
        let (i, r, s) = (di[k], dr[k], ds[k]);
        let (idr, ids, idi) = (
            ExactMatrix::identity(field, r),
            ExactMatrix::identity(field, s),
            ExactMatrix::identity(field, i),
        );
        a12.push(blocks(field, &[r, s], &[i, r], &[&[None, Some(&idr)], &[None, None]]));
        a23.push(blocks(field, &[s, i], &[r, s], &[&[None, Some(&ids)], &[None, None]]));
        a31.push(blocks(field, &[i, r], &[s, i], &[&[None, Some(&idi)], &[None, None]]));
    }

    let dims_v: Vec<usize> = (0..len).map(|k| di[k] + dr[k]).collect();
    let dims_w: Vec<usize> = (0..len).map(|k| dr[k] + ds[k]).collect();
    let dims_u: Vec<usize> = (0..len).map(|k| ds[k] + di[k]).collect();
    let gv: Vec<_> = dims_v.iter().map(|&d| random_invertible(rng, field, d)).collect();
    let gw: Vec<_> = dims_w.iter().map(|&d| random_invertible(rng, field, d)).collect();
    let gu: Vec<_> = dims_u.iter().map(|&d| random_invertible(rng, field, d)).collect();

    let twist = |steps: &[ExactMatrix], g: &[(ExactMatrix, ExactMatrix)]| -> Vec<ExactMatrix> {
        steps
            .iter()
            .enumerate()
            .map(|(k, s)| conj(&g[k + 1].0, s, &g[k].1))
            .collect()
    };
    let maps = |ms: &[ExactMatrix], tgt: &[(ExactMatrix, ExactMatrix)], src: &[(ExactMatrix, ExactMatrix)]| {
        ms.iter()
            .enumerate()
            .map(|(k, m)| conj(&tgt[k].0, m, &src[k].1))
            .collect::<Vec<_>>()
    };

    let v = ConcreteFds::new(field, grid.clone(), dims_v, twist(&sv, &gv), true).expect("valid");
    let w = ConcreteFds::new(field, grid.clone(), dims_w, twist(&sw, &gw), true).expect("valid");
    let u = ConcreteFds::new(field, grid, dims_u, twist(&su, &gu), true).expect("valid");
    ExactTriangle {
        a12: maps(&a12, &gw, &gv),
        a23: maps(&a23, &gu, &gw),
        a31: maps(&a31, &gv, &gu),
        v,
        w,
        u,
        c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangles_meet_preconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let t = random_exact_triangle(&mut rng, Field::F2, 8, 2);
            t.check_exact().unwrap();
            t.check_commuting().unwrap();
            t.check_u_tail().unwrap();
        }
    }

    #[test]
    fn invertible_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..5 {
            let (g, h) = random_invertible(&mut rng, Field::Prime(3), n);
            assert!(g.mul(&h).unwrap().is_identity());
        }
    }
}

/// Uniformly random element of the solution space of a homogeneous linear
/// condition on `rows x cols` matrices, given as `constraint(S)` which must
/// vanish.
fn random_solution<R: Rng>(
    rng: &mut R,
    field: Field,
    rows: usize,
    cols: usize,
    constraint: impl Fn(&ExactMatrix) -> Vec<BigRational>,
) -> ExactMatrix {
    let n = rows * cols;
    let mut columns = Vec::with_capacity(n);
    for idx in 0..n {
        let mut e = ExactMatrix::zeros(field, rows, cols);
        e.set(idx / cols.max(1), idx % cols.max(1), BigRational::one()).expect("unit");
        columns.push(constraint(&e));
    }
    let m = columns.first().map_or(0, Vec::len);
    let system = ExactMatrix::from_columns(field, m, &columns);
    let kernel = system.kernel();
    let mut v = vec![field.from_i64(0); n];
    for j in 0..kernel.cols() {
        let coef = random_scalar(rng, field);
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = field.add(slot, &field.mul(&coef, kernel.get(i, j)));
        }
    }
    ExactMatrix::new(field, rows, cols, v).expect("reduced")
}

fn flatten(m: &ExactMatrix) -> Vec<BigRational> {
    m.entries().to_vec()
}

/// Random `D` with `D² = 0`, of rank at most `n / 2`.
fn random_square_zero<R: Rng>(rng: &mut R, field: Field, n: usize) -> ExactMatrix {
    let r = rng.gen_range(0..=n / 2);
    let mut nil = ExactMatrix::zeros(field, n, n);
    for k in 0..r {
        nil.set(k, r + k, BigRational::one()).expect("unit");
    }
    let (g, gi) = random_invertible(rng, field, n);
    conj(&g, &nil, &gi)
}

fn sub(m: &ExactMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> ExactMatrix {
    m.select(&rows.collect::<Vec<_>>(), &cols.collect::<Vec<_>>())
}

/// Differential on `A ⊕ B` whose `B` block is itself a differential.
fn random_split_differential<R: Rng>(rng: &mut R, field: Field, a: usize, b: usize) -> ExactMatrix {
    let n = a + b;
    if rng.gen_bool(0.5) {
        for _ in 0..20 {
            let d = random_square_zero(rng, field, n);
            let db = sub(&d, a..n, a..n);
            if db.mul(&db).expect("square").is_zero() {
                return d;
            }
        }
    }
    // block upper triangular: no A -> B component
    let da = random_square_zero(rng, field, a);
    let db = random_square_zero(rng, field, b);
    let x = random_solution(rng, field, a, b, |x| {
        let l = da.mul(x).expect("shape");
        let r = x.mul(&db).expect("shape");
        flatten(&l.add(&r).expect("shape"))
    });
    let mut d = ExactMatrix::zeros(field, n, n);
    d.paste(0, 0, &da);
    d.paste(0, a, &x);
    d.paste(a, a, &db);
    d
}

/// Random family meeting every structural hypothesis of the split bound:
/// chain-map steps, a differential `B` block commuting with the `B` blocks
/// of the steps, and functorial `B` blocks.
pub fn random_split_family<R: Rng>(rng: &mut R, field: Field, points: usize, max_total: usize) -> super::SplitFamily {
    let grid = random_grid(rng, points);
    let mut a_dims = Vec::with_capacity(points);
    let mut b_dims = Vec::with_capacity(points);
    for _ in 0..points {
        let a = rng.gen_range(0..=2.min(max_total));
        let b = rng.gen_range(0..=max_total - a);
        a_dims.push(a);
        b_dims.push(b);
    }
    let differentials: Vec<ExactMatrix> = (0..points)
        .map(|k| random_split_differential(rng, field, a_dims[k], b_dims[k]))
        .collect();

    // composites q_{i,k} for i <= k, kept to constrain the next step
    let mut composites: Vec<ExactMatrix> = vec![ExactMatrix::identity(field, a_dims[0] + b_dims[0])];
    let mut steps = Vec::with_capacity(points.saturating_sub(1));
    for k in 0..points.saturating_sub(1) {
        let (a0, n0) = (a_dims[k], a_dims[k] + b_dims[k]);
        let (a1, n1) = (a_dims[k + 1], a_dims[k + 1] + b_dims[k + 1]);
        let (d0, d1) = (&differentials[k], &differentials[k + 1]);
        let db0 = sub(d0, a0..n0, a0..n0);
        let db1 = sub(d1, a1..n1, a1..n1);
        let prev = composites.clone();
        let prev_a: Vec<usize> = (0..=k).map(|i| a_dims[i]).collect();
        let prev_n: Vec<usize> = (0..=k).map(|i| a_dims[i] + b_dims[i]).collect();
        let s = random_solution(rng, field, n1, n0, |s| {
            let mut out = flatten(&s.mul(d0).expect("shape").sub(&d1.mul(s).expect("shape")).expect("shape"));
            let sb = sub(s, a1..n1, a0..n0);
            out.extend(flatten(&sb.mul(&db0).expect("shape").sub(&db1.mul(&sb).expect("shape")).expect("shape")));
            // B rows, A columns of the step times A rows, B columns of each composite
            let sba = sub(s, a1..n1, 0..a0);
            for (i, p) in prev.iter().enumerate() {
                let pab = sub(p, 0..a0, prev_a[i]..prev_n[i]);
                out.extend(flatten(&sba.mul(&pab).expect("shape")));
            }
            out
        });
        composites = composites
            .iter()
            .map(|p| s.mul(p).expect("shape"))
            .chain(std::iter::once(ExactMatrix::identity(field, n1)))
            .collect();
        steps.push(s);
    }
    let c = [
        BigRational::one(),
        BigRational::new(3.into(), 2.into()),
        BigRational::from_integer(2.into()),
    ][rng.gen_range(0..3)]
    .clone();
    super::SplitFamily {
        field,
        grid,
        a_dims,
        b_dims,
        differentials,
        steps,
        c,
        stabilized: true,
    }
}

/// Random cycle in the span of the listed basis vectors.
fn random_cycle_in<R: Rng>(rng: &mut R, field: Field, d: &ExactMatrix, span: &[usize]) -> Vec<BigRational> {
    let all: Vec<usize> = (0..d.rows()).collect();
    let z = d.select(&all, span).kernel();
    let mut v = vec![field.from_i64(0); d.rows()];
    for j in 0..z.cols() {
        let coef = random_scalar(rng, field);
        for (r, &row) in span.iter().enumerate() {
            v[row] = field.add(&v[row], &field.mul(&coef, z.get(r, j)));
        }
    }
    v
}

/// Adds a basis vector at `level` whose boundary is a random cycle of `F_level`.
fn push_vector<R: Rng>(rng: &mut R, field: Field, d: &ExactMatrix, levels: &mut Vec<usize>, level: usize) -> ExactMatrix {
    let span: Vec<usize> = (0..levels.len()).filter(|&k| levels[k] <= level).collect();
    let bd = if rng.gen_bool(0.6) && !span.is_empty() {
        random_cycle_in(rng, field, d, &span)
    } else {
        vec![field.from_i64(0); d.rows()]
    };
    let n = d.rows();
    let mut out = ExactMatrix::zeros(field, n + 1, n + 1);
    out.paste(0, 0, d);
    for (r, v) in bd.into_iter().enumerate() {
        out.set(r, n, v).expect("reduced");
    }
    levels.push(level);
    out
}

/// Random filtered family meeting the graded-isomorphism and exhaustion
/// hypotheses for constants `m`, `n`.
///
/// Complexes grow along inclusions; a vector of level `l` is only added on
/// the way to a point `x` with `x <= m l` and `l <= ⌊n x⌋`, so graded pieces
/// stop changing once the isomorphism range is reached. Each point then gets
/// a random filtration-preserving change of basis.
pub fn random_filtration_family<R: Rng>(
    rng: &mut R,
    field: Field,
    len: usize,
    m: &BigRational,
    n: &BigRational,
    max_dim: usize,
) -> super::FiltrationFamily {
    let grid = random_grid(rng, len);
    let cap = |x: &BigRational| -> usize { (n * x).floor().to_integer().try_into().unwrap_or(0) };
    let mut d = ExactMatrix::zeros(field, 0, 0);
    let mut levels: Vec<usize> = Vec::new();
    let mut raw_d = Vec::with_capacity(len);
    let mut raw_levels = Vec::with_capacity(len);
    let mut sizes = Vec::with_capacity(len);
    for (k, x) in grid.iter().enumerate() {
        let allowed: Vec<usize> = (0..=cap(x))
            .filter(|&l| k == 0 || x <= &(m * BigRational::from_integer(BigInt::from(l))))
            .collect();
        let adds = if allowed.is_empty() { 0 } else { rng.gen_range(0..=2) };
        for _ in 0..adds {
            if levels.len() >= max_dim {
                break;
            }
            let l = allowed[rng.gen_range(0..allowed.len())];
            d = push_vector(rng, field, &d, &mut levels, l);
        }
        raw_d.push(d.clone());
        raw_levels.push(levels.clone());
        sizes.push(levels.len());
    }

    // filtration-preserving basis changes: entries only where level[r] <= level[c]
    let bases: Vec<(ExactMatrix, ExactMatrix)> = raw_levels
        .iter()
        .map(|lv| loop {
            let dim = lv.len();
            let mut g = ExactMatrix::identity(field, dim);
            for r in 0..dim {
                for c in 0..dim {
                    if r != c && lv[r] <= lv[c] {
                        g.set(r, c, random_scalar(rng, field)).expect("reduced");
                    }
                }
            }
            if g.rank() == dim {
                let gi = g.solve(&ExactMatrix::identity(field, dim)).expect("square").expect("invertible");
                break (g, gi);
            }
        })
        .collect();
    let complexes = (0..len)
        .map(|k| super::FilteredComplex {
            differential: conj(&bases[k].0, &raw_d[k], &bases[k].1),
            levels: raw_levels[k].clone(),
        })
        .collect();
    let steps = (1..len)
        .map(|k| {
            let inc = super::system::inclusion(field, sizes[k - 1], sizes[k]);
            conj(&bases[k].0, &inc, &bases[k - 1].1)
        })
        .collect();
    super::FiltrationFamily {
        field,
        grid,
        complexes,
        steps,
        stabilized: true,
    }
}

#[cfg(test)]
mod family_tests {
    use super::*;
    use crate::fds::{filtration_report, split_report};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn split_families_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let fam = random_split_family(&mut rng, Field::F2, 3, 8);
            fam.check_structure().unwrap();
            split_report(&fam).unwrap();
        }
    }

    #[test]
    fn filtration_families_meet_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let two = BigRational::from_integer(2.into());
        for _ in 0..20 {
            let fam = random_filtration_family(&mut rng, Field::F2, 5, &two, &two, 6);
            let r = filtration_report(&fam, &two, &two).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }
}
