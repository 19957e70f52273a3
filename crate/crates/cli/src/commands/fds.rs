use grl_core::exactalg::{parse_rational, Field};
use grl_core::fds::random::{random_exact_triangle, random_filtration_family, random_split_family};
use grl_core::fds::{
    direct_sum, estimate_growth_rate, filtration_report, growth_rate, isomorphism_report, les_collapse_isomorphism,
    split_report, tensor, bigger_than_report, ConcreteFds, ExactTriangle, FiltrationFamily, RankProfile, SplitFamily,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::args::{FdsCmd, Global, Operands, RandomOr};
use crate::output::{read_json, CliError, Exit, Outcome};

fn field(g: &Global) -> Result<Field, CliError> {
    g.field.parse().map_err(|e| CliError::Usage(format!("{e}")))
}

fn rational(name: &str, s: &str) -> Result<num_rational::BigRational, CliError> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("--{name}: not a rational number: {s}")))
}

fn profiles(ops: &Operands) -> Result<Vec<RankProfile>, CliError> {
    ops.profiles
        .iter()
        .map(|s| s.parse::<RankProfile>().map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn systems(ops: &Operands) -> Result<Vec<ConcreteFds>, CliError> {
    ops.files.iter().map(|f| read_json(f)).collect()
}

fn pair<T>(mut v: Vec<T>, what: &str) -> Result<(T, T), CliError> {
    if v.len() != 2 {
        return Err(CliError::Usage(format!("{what} takes two operands, got {}", v.len())));
    }
    let b = v.pop().unwrap();
    Ok((v.pop().unwrap(), b))
}

fn binary(ops: &Operands, what: &str, sum: bool) -> Result<Outcome, CliError> {
    match (ops.profiles.is_empty(), ops.files.is_empty()) {
        (false, true) => {
            let (p, q) = pair(profiles(ops)?, what)?;
            let r = if sum { p.direct_sum(&q) } else { p.tensor(&q) };
            let gamma = growth_rate(&r);
            Outcome::ok(&json!({ "profile": r, "gamma": gamma }), format!("{r}  gamma = {gamma}"))
        }
        (true, false) => {
            let (v, w) = pair(systems(ops)?, what)?;
            let r = if sum { direct_sum(&v, &w) } else { tensor(&v, &w) }.map_err(CliError::compute)?;
            let dims = format!("{:?}", r.dims());
            Outcome::ok(&r, format!("{what} on {} grid points, dims {dims}", r.len()))
        }
        _ => Err(CliError::Usage(format!("{what} takes either two --profile values or two files"))),
    }
}

fn instances<T>(input: &RandomOr, g: &Global, make: impl Fn(&mut ChaCha8Rng) -> T) -> Result<Vec<T>, CliError>
where
    T: serde::de::DeserializeOwned,
{
    match (&input.file, input.random) {
        (Some(f), None) => Ok(vec![read_json(f)?]),
        (None, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            Ok((0..n).map(|_| make(&mut rng)).collect())
        }
        _ => Err(CliError::Usage("give either an input file or --random N".into())),
    }
}

pub fn run(cmd: &FdsCmd, g: &Global) -> Result<Outcome, CliError> {
    match cmd {
        FdsCmd::Gamma(ops) => {
            if !ops.files.is_empty() {
                let [f] = ops.files.as_slice() else {
                    return Err(CliError::Usage("gamma takes one file".into()));
                };
                let v: ConcreteFds = read_json(f)?;
                let est = estimate_growth_rate(&v).map_err(CliError::compute)?;
                return Outcome::ok(&est, est.to_string());
            }
            let [p] = profiles(ops)?.try_into().map_err(|_| CliError::Usage("gamma takes one --profile".into()))?;
            let gamma = growth_rate(&p);
            Outcome::ok(&json!({ "profile": p, "gamma": gamma }), gamma.to_string())
        }
        FdsCmd::Tensor(ops) => binary(ops, "tensor", false),
        FdsCmd::Sum(ops) => binary(ops, "sum", true),
        FdsCmd::Bigger { v, w, a, b, c } => {
            let (v, w): (ConcreteFds, ConcreteFds) = (read_json(v)?, read_json(w)?);
            let rep = bigger_than_report(&v, &w, &rational("a", a)?, &rational("b", b)?, &rational("c", c)?)
                .map_err(CliError::compute)?;
            let text = match &rep.violation {
                None => format!("bigger: holds ({} pairs)", rep.pairs_checked),
                Some(x) => format!("bigger: fails at {x:?}"),
            };
            let exit = if rep.holds { Exit::Success } else { Exit::Negative };
            Outcome::new(&rep, text, exit)
        }
        FdsCmd::Les(input) => {
            let f = field(g)?;
            let triangles: Vec<ExactTriangle> = instances(input, g, |r| random_exact_triangle(r, f, 8, 2))?;
            let mut failures = 0;
            let mut last = None;
            for t in &triangles {
                let (phi, back) = les_collapse_isomorphism(t).map_err(CliError::compute)?;
                let rep = isomorphism_report(&t.v, &t.w, &phi, &back).map_err(CliError::compute)?;
                failures += usize::from(!rep.holds);
                last = Some(json!({ "phi": phi, "phi_back": back, "isomorphism": rep }));
            }
            let value = if input.file.is_some() {
                last.unwrap_or_default()
            } else {
                json!({ "instances": triangles.len(), "failures": failures })
            };
            let exit = if failures == 0 { Exit::Success } else { Exit::Negative };
            Outcome::new(&value, format!("les: {} triangles, {failures} failures", triangles.len()), exit)
        }
        FdsCmd::Filtration { input, m, n } => {
            let (m, n) = (rational("m", m)?, rational("n", n)?);
            let f = field(g)?;
            let fams: Vec<FiltrationFamily> = instances(input, g, |r| random_filtration_family(r, f, 5, &m, &n, 4))?;
            let reports = fams
                .iter()
                .map(|fam| filtration_report(fam, &m, &n))
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::compute)?;
            let failures = reports.iter().filter(|r| !r.holds).count();
            let value = match reports.as_slice() {
                [one] if input.file.is_some() => serde_json::to_value(one).map_err(CliError::compute)?,
                _ => json!({ "instances": reports.len(), "failures": failures }),
            };
            let exit = if failures == 0 { Exit::Success } else { Exit::Negative };
            Outcome::new(&value, format!("filtration: {} families, {failures} failures", reports.len()), exit)
        }
        FdsCmd::Splitbound(input) => {
            let f = field(g)?;
            let fams: Vec<SplitFamily> = instances(input, g, |r| random_split_family(r, f, 3, 8))?;
            let reports = fams.iter().map(split_report).collect::<Result<Vec<_>, _>>().map_err(CliError::compute)?;
            let violations = reports.iter().filter(|r| !r.holds).count();
            let widened = reports.iter().filter(|r| !r.widened_holds).count();
            let value = match reports.as_slice() {
                [one] if input.file.is_some() => serde_json::to_value(one).map_err(CliError::compute)?,
                _ => json!({ "instances": reports.len(), "violations": violations, "widened_violations": widened }),
            };
            let exit = if violations == 0 { Exit::Success } else { Exit::Negative };
            let text = format!(
                "splitbound: {} families, {violations} violations, {widened} with the widened bound",
                reports.len()
            );
            Outcome::new(&value, text, exit)
        }
    }
}
