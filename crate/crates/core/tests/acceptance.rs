//! Acceptance run: one line per criterion. Exits nonzero when an outcome
//! differs from the expectation, including a known failure that now passes.

use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use grl_core::exactalg::{smith_normal_form, Field, HomologyGroup, IntegerMatrix};
use grl_core::fds::random::{random_exact_triangle, random_fds, random_grid, random_split_family};
use grl_core::fds::{align, growth_rate, les_collapse_isomorphism, split_report, tensor, verify_isomorphism};
use grl_core::fds::{ConcreteFds, GrowthRate, RankProfile};
use grl_core::groups::{
    catalog, conjugacy_count, table_slope, todd_coxeter, Budget, FiniteGroupTable, GroupClass, GroupError,
    NontrivialityWitness, Presentation, TrivialityOutcome, Word,
};
use grl_core::handles::{build_n2, build_np, core_group_status, synth_boundary_model, verify_contractible};
use grl_core::handles::ContractibilityOutcome;
use grl_core::verdict::{np_verdict, replay, Conclusion};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, u64);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gamma_closed_forms() -> Check {
    for n in 1..=6u32 {
        let g = growth_rate(&RankProfile::Polynomial(n));
        ensure(g == GrowthRate::integer(i64::from(n)), || format!("poly:{n} gave {g}"))?;
    }
    ensure(growth_rate(&RankProfile::Zero) == GrowthRate::MinusInfinity, || "zero".into())?;
    let e = RankProfile::Exponential(BigRational::from_integer(BigInt::from(2)));
    ensure(growth_rate(&e) == GrowthRate::Infinity, || "exponential".into())?;
    Ok("poly:1..6 -> 1..6, zero -> -inf, exp -> inf".into())
}

fn random_profile(r: &mut ChaCha8Rng) -> RankProfile {
    match r.gen_range(0..4) {
        0 => RankProfile::Zero,
        1 => RankProfile::Bounded(r.gen_range(1..50)),
        2 => RankProfile::Polynomial(r.gen_range(1..8)),
        _ => {
            let d: i64 = r.gen_range(1..4);
            RankProfile::Exponential(BigRational::new(BigInt::from(d + r.gen_range(1..8)), BigInt::from(d)))
        }
    }
}

fn small_fds(r: &mut ChaCha8Rng) -> ConcreteFds {
    let len = r.gen_range(2..=6);
    let grid = random_grid(r, len);
    random_fds(r, Field::F2, grid, 4)
}

fn tensor_additivity() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for i in 0..200 {
        let (p, q) = (random_profile(&mut r), random_profile(&mut r));
        let lhs = growth_rate(&p.tensor(&q));
        let rhs = growth_rate(&p).add(&growth_rate(&q));
        ensure(lhs == rhs, || format!("profile pair {i}: {p} x {q}: {lhs} != {rhs}"))?;
    }
    for i in 0..100 {
        let (v, w) = align(&small_fds(&mut r), &small_fds(&mut r)).map_err(|e| e.to_string())?;
        let t = tensor(&v, &w).map_err(|e| e.to_string())?;
        let (av, aw, at) = (v.a_table().unwrap(), w.a_table().unwrap(), t.a_table().unwrap());
        ensure(at.iter().zip(av.iter().zip(&aw)).all(|(t, (a, b))| *t == a * b), || {
            format!("system pair {i}: {at:?} vs {av:?} * {aw:?}")
        })?;
    }
    Ok("200 profile pairs, 100 system pairs".into())
}

fn les_collapse() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    for i in 0..300 {
        let t = random_exact_triangle(&mut r, Field::F2, 8, 2);
        let (phi, back) = les_collapse_isomorphism(&t).map_err(|e| format!("triangle {i}: {e}"))?;
        ensure(back.shift == &t.c * &t.c, || format!("triangle {i}: shift {}", back.shift))?;
        ensure(verify_isomorphism(&t.v, &t.w, &phi, &back).unwrap(), || format!("triangle {i} not an isomorphism"))?;
    }
    Ok("300 triangles, 0 failures".into())
}

fn split_bound() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let (mut stated, mut widened) = (0, 0);
    for _ in 0..1000 {
        let rep = split_report(&random_split_family(&mut r, Field::F2, 3, 8)).map_err(|e| e.to_string())?;
        stated += usize::from(!rep.holds);
        widened += usize::from(!rep.widened_holds);
    }
    let detail = format!("{stated}/1000 violate the stated bound, {widened}/1000 the bound widened by 2|A_C|");
    if stated == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn snf_properties() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for i in 0..500 {
        let (rows, cols) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let entries = (0..rows * cols).map(|_| BigInt::from(r.gen_range(-20i64..=20))).collect();
        let m = IntegerMatrix::new(rows, cols, entries).unwrap();
        let s = smith_normal_form(&m);
        let prod = s.u.mul(&m).and_then(|x| x.mul(&s.v)).unwrap();
        ensure(prod == s.d, || format!("matrix {i}: U m V != D"))?;
        for (name, x) in [("U", &s.u), ("V", &s.v)] {
            let det = x.determinant().unwrap();
            ensure(det.abs().is_one(), || format!("matrix {i}: det {name} = {det}"))?;
        }
        for a in 0..rows {
            for b in 0..cols {
                ensure(a == b || s.d.get(a, b).is_zero(), || format!("matrix {i}: D not diagonal"))?;
            }
        }
        let diag: Vec<BigInt> = (0..rows.min(cols)).map(|k| s.d.get(k, k).clone()).collect();
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            ensure(ok && !w[0].is_negative(), || format!("matrix {i}: diagonal {diag:?}"))?;
        }
    }
    Ok("500 matrices".into())
}

/// Conjugacy classes of a free group meeting the ball of radius `x`: cyclic
/// words of length at most `x`, counted by brute force.
fn free_class_oracle(k: i32, x: usize) -> usize {
    let letters: Vec<i32> = (1..=k).flat_map(|g| [g, -g]).collect();
    let mut words: Vec<Vec<i32>> = vec![vec![]];
    let mut classes = HashSet::new();
    for _ in 0..=x {
        let mut next = Vec::new();
        for w in &words {
            let c = Word::new(w.clone()).unwrap().cyclically_reduced();
            let canon = (0..c.len().max(1)).map(|s| c.rotate(s)).min().unwrap();
            classes.insert(canon);
            for &l in &letters {
                let mut e = w.clone();
                e.push(l);
                next.push(e);
            }
        }
        words = next;
    }
    classes.len()
}

fn conjugacy_growth() -> Check {
    let mut slopes = Vec::new();
    for n in 1..=3 {
        let s = table_slope(&conjugacy_count(&GroupClass::FreeAbelian { rank: n }, 40).map_err(|e| e.to_string())?);
        ensure((s - n as f64).abs() <= 0.15, || format!("Z^{n} slope {s:.3}"))?;
        slopes.push(format!("{s:.3}"));
    }
    let f2 = conjugacy_count(&GroupClass::Free { rank: 2 }, 2).map_err(|e| e.to_string())?;
    let oracle = free_class_oracle(2, 2);
    ensure(f2.get(2) == &BigInt::from(13) && oracle == 13, || format!("Free(2) f(2) = {}, oracle {oracle}", f2.get(2)))?;
    let s3 = conjugacy_count(&GroupClass::Finite { table: FiniteGroupTable::symmetric(3) }, 10).map_err(|e| e.to_string())?;
    ensure(s3.counts[3..].iter().all(|c| c == &BigInt::from(3)), || format!("S3 counts {:?}", s3.counts))?;
    Ok(format!("Z^n slopes {}, Free(2) f(2) = 13, S3 -> 3", slopes.join("/")))
}

fn pipeline_dichotomy() -> Check {
    let budget = Budget::default();
    let trivial = build_np(&Presentation::trivial(), 8).map_err(|e| e.to_string())?;
    let c = verify_contractible(&trivial, budget).map_err(|e| e.to_string())?;
    ensure(c == ContractibilityOutcome::Certified, || format!("trivial: {c:?}"))?;
    let v = np_verdict(&Presentation::trivial(), 8, budget).map_err(|e| e.to_string())?;
    ensure(v.conclusion == Conclusion::Finite, || format!("trivial verdict {:?}", v.conclusion))?;

    let ico = catalog::binary_icosahedral();
    let l = build_np(&ico, 8).map_err(|e| e.to_string())?;
    ensure(l.homology().is_acyclic(), || format!("icosahedral homology {}", l.homology()))?;
    let interior = verify_contractible(&l, budget).map_err(|e| e.to_string())?;
    let order = match core_group_status(&l, budget).map_err(|e| e.to_string())? {
        TrivialityOutcome::Nontrivial {
            witness: NontrivialityWitness::Permutation { witness },
        } if witness.degree == 5 => witness.image().map(|g| g.order()).unwrap_or(0),
        other => return Err(format!("icosahedral core group: {other:?}")),
    };
    let v = np_verdict(&ico, 8, budget).map_err(|e| e.to_string())?;
    ensure(v.conclusion == Conclusion::Infinite, || format!("icosahedral verdict {:?}", v.conclusion))?;
    Ok(format!(
        "trivial: certified, finite; icosahedral: acyclic, S5 witness of order {order}, infinite (interior {interior:?})"
    ))
}

fn todd_coxeter_orders() -> Check {
    let killed = todd_coxeter(&Presentation::parse(1, &["a"]).unwrap(), 1000).map_err(|e| e.to_string())?;
    ensure(killed.order() == 1, || format!("<a|a> order {}", killed.order()))?;
    let a5 = todd_coxeter(&catalog::alternating5(), 100_000).map_err(|e| e.to_string())?;
    ensure(a5.order() == 60, || format!("A5 order {}", a5.order()))?;
    let ico = catalog::binary_icosahedral();
    let starved: Vec<_> = (0..2).map(|_| todd_coxeter(&ico, 20).map(|t| t.order())).collect();
    ensure(
        starved.iter().all(|r| r == &Err(GroupError::Exceeded { budget: 20 })),
        || format!("starved runs {starved:?}"),
    )?;
    Ok("<a|a> -> 1, A5 -> 60, starved -> Exceeded twice".into())
}

fn homology_pattern() -> Check {
    let n = 8;
    let corpus = catalog::perfect_corpus();
    for (name, p) in &corpus {
        let l = build_n2(&synth_boundary_model(p, n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let h = l.homology();
        for i in 0..=l.chain().top_degree() + 1 {
            let expected = if i == 0 || i == n - 2 { HomologyGroup::free(1) } else { HomologyGroup::free(0) };
            ensure(h.get(i) == expected, || format!("{name}: H_{i} = {}", h.get(i)))?;
        }
    }
    Ok(format!("{} presentations, H_0 = H_6 = Z", corpus.len()))
}

fn verdict_replay() -> Check {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut inputs: Vec<(String, Presentation)> = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| e.to_string())?;
        inputs.push((f.display().to_string(), serde_json::from_str(&text).map_err(|e| e.to_string())?));
    }
    inputs.extend(catalog::perfect_corpus().into_iter().map(|(n, p)| (n.to_string(), p)));
    let mut checked = 0;
    for (name, p) in &inputs {
        for budget in [Budget::default(), Budget { max_cosets: 2, max_degree: 2 }] {
            // inputs failing the construction's preconditions emit no verdict
            let Ok(v) = np_verdict(p, 8, budget) else { continue };
            replay(&v).map_err(|e| format!("{name}: {e}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} verdicts from {} inputs replayed", inputs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("growth-rate closed forms", gamma_closed_forms, 1),
        ("tensor additivity", tensor_additivity, 10),
        ("exact-triangle collapse", les_collapse, 30),
        ("split homology bound", split_bound, 60),
        ("Smith normal form", snf_properties, 10),
        ("conjugacy growth", conjugacy_growth, 60),
        ("pipeline dichotomy", pipeline_dichotomy, 120),
        ("coset enumeration", todd_coxeter_orders, 30),
        ("homology pattern", homology_pattern, 30),
        ("verdict replay", verdict_replay, 10),
    ];
    // fails on random instances; see the split-bound notes in the README
    let expected_failures = [4];
    let (mut failed, mut unexpected) = (0, 0);
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > Duration::from_secs(limit) {
            result = Err(format!("took {:.2}s, limit {limit}s", elapsed.as_secs_f64()));
        }
        let known = expected_failures.contains(&(i + 1));
        let (status, detail) = match &result {
            Ok(d) if known => ("PASS (expected to fail)", d),
            Ok(d) => ("PASS", d),
            Err(d) if known => ("FAIL (known)", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(result.is_err());
        unexpected += usize::from(result.is_err() != known);
        println!("criterion {:>2} {status} {name}: {detail} [{:.2}s]", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of 10 criteria pass, {unexpected} unexpected outcomes", 10 - failed);
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
