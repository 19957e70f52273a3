use grl_core::groups::{
    abelianization, conjugacy_count, conjugacy_growth_rate, free_product_all, search_nontrivial_quotient, table_slope,
    todd_coxeter, triviality_semidecide, Budget, GroupClass, GroupError, Presentation, TrivialityOutcome,
};
use serde_json::json;

use crate::args::{Global, GroupCmd};
use crate::output::{read_json, CliError, Exit, Outcome};

pub fn budget(g: &Global) -> Budget {
    Budget {
        max_cosets: g.max_cosets,
        max_degree: g.max_degree,
    }
}

fn class(s: &str) -> Result<GroupClass, CliError> {
    s.parse().map_err(|e: GroupError| CliError::Usage(e.to_string()))
}

pub fn triviality_exit(o: &TrivialityOutcome) -> Exit {
    match o {
        TrivialityOutcome::Trivial => Exit::Success,
        TrivialityOutcome::Nontrivial { .. } => Exit::Negative,
        TrivialityOutcome::Unknown => Exit::Unknown,
    }
}

pub fn run(cmd: &GroupCmd, g: &Global) -> Result<Outcome, CliError> {
    match cmd {
        GroupCmd::H1 { file } => {
            let p: Presentation = read_json(file)?;
            let h = abelianization(&p);
            Outcome::ok(&h, h.to_string())
        }
        GroupCmd::Freeprod { files } => {
            let ps = files.iter().map(|f| read_json(f)).collect::<Result<Vec<Presentation>, _>>()?;
            let p = free_product_all(&ps);
            Outcome::ok(&p, p.to_string())
        }
        GroupCmd::Tc { file } => {
            let p: Presentation = read_json(file)?;
            match todd_coxeter(&p, g.max_cosets) {
                Ok(t) => Outcome::ok(&t, format!("order {}", t.order())),
                Err(GroupError::Exceeded { budget }) => Outcome::new(
                    &json!({ "exceeded": budget }),
                    format!("coset enumeration exceeded {budget} cosets"),
                    Exit::Unknown,
                ),
                Err(e) => Err(CliError::compute(e)),
            }
        }
        GroupCmd::Quotient { file } => {
            let p: Presentation = read_json(file)?;
            match search_nontrivial_quotient(&p, g.max_degree).map_err(CliError::compute)? {
                Some(w) => {
                    let text = format!("nontrivial quotient in S_{}", w.degree);
                    Outcome::new(&w, text, Exit::Negative)
                }
                None => Outcome::new(
                    &serde_json::Value::Null,
                    format!("no nontrivial quotient up to S_{}", g.max_degree),
                    Exit::Unknown,
                ),
            }
        }
        GroupCmd::Trivial { file } => {
            let p: Presentation = read_json(file)?;
            let o = triviality_semidecide(&p, budget(g)).map_err(CliError::compute)?;
            let text = match &o {
                TrivialityOutcome::Trivial => "trivial".to_string(),
                TrivialityOutcome::Nontrivial { witness } => format!("nontrivial: {witness:?}"),
                TrivialityOutcome::Unknown => "unknown within budget".to_string(),
            };
            Outcome::new(&o, text, triviality_exit(&o))
        }
        GroupCmd::Conjcount { class: c } => {
            let t = conjugacy_count(&class(c)?, g.x_max).map_err(CliError::compute)?;
            let text = t.counts.iter().enumerate().map(|(x, n)| format!("{x}\t{n}")).collect::<Vec<_>>().join("\n");
            Outcome::ok(&t, text)
        }
        GroupCmd::Conjrate { class: c } => {
            let gc = class(c)?;
            let rate = conjugacy_growth_rate(&gc).map_err(CliError::compute)?;
            let slope = conjugacy_count(&gc, g.x_max).ok().map(|t| table_slope(&t));
            let text = match slope {
                Some(s) => format!("{rate}  (table slope {s:.4} at x_max {})", g.x_max),
                None => rate.to_string(),
            };
            Outcome::ok(&json!({ "rate": rate, "table_slope": slope, "x_max": g.x_max }), text)
        }
    }
}
