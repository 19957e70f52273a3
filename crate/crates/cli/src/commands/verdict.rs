use std::path::Path;

use grl_core::groups::Presentation;
use grl_core::verdict::{
    cn_comparison, distinguish, np_verdict, replay, rules, CnComparison, Conclusion, Distinction, Verdict, DISCLAIMER,
};
use serde_json::json;

use super::group::budget;
use crate::args::{Global, VerdictCmd};
use crate::output::{read_json, read_text, CliError, Exit, Outcome};

pub fn conclusion_exit(c: Conclusion) -> Exit {
    match c {
        Conclusion::Finite => Exit::Success,
        Conclusion::Infinite => Exit::Negative,
        Conclusion::Interval | Conclusion::Unknown => Exit::Unknown,
    }
}

pub fn render(v: &Verdict) -> String {
    let mut s = format!(
        "conclusion {:?}  Gamma in [{}, {}]  group {:?}\n",
        v.conclusion, v.lower, v.upper, v.group_fact
    );
    for step in &v.derivation {
        s.push_str(&format!("  {}  {}\n", step.rule, grl_core::verdict::rule(step.rule).statement));
    }
    s.push_str(DISCLAIMER);
    s
}

/// A path to a stored verdict, or a presentation to derive one from.
fn load_verdict(path: &Path, g: &Global) -> Result<Verdict, CliError> {
    let text = read_text(path)?;
    if let Ok(v) = serde_json::from_str::<Verdict>(&text) {
        return Ok(v);
    }
    let p: Presentation = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: format!("neither a verdict nor a presentation: {e}"),
    })?;
    np_verdict(&p, 8, budget(g)).map_err(CliError::compute)
}

pub fn run(cmd: &VerdictCmd, g: &Global) -> Result<Outcome, CliError> {
    match cmd {
        VerdictCmd::Np { file, n } => {
            let p: Presentation = read_json(file)?;
            let v = np_verdict(&p, *n, budget(g)).map_err(CliError::compute)?;
            Outcome::new(&v, render(&v), conclusion_exit(v.conclusion))
        }
        VerdictCmd::Distinguish { first, second, n } => {
            let (p, q): (Presentation, Presentation) = (read_json(first)?, read_json(second)?);
            let d = distinguish(&p, &q, *n, budget(g)).map_err(CliError::compute)?;
            let exit = match d {
                Distinction::Distinguished => Exit::Success,
                Distinction::NotDistinguished => Exit::Negative,
                Distinction::Unknown => Exit::Unknown,
            };
            Outcome::new(&json!({ "distinction": d }), format!("{d:?}"), exit)
        }
        VerdictCmd::Cn { verdict } => {
            let v = load_verdict(verdict, g)?;
            let c = cn_comparison(&v);
            let exit = if c == CnComparison::NotStandardCn { Exit::Success } else { Exit::Unknown };
            Outcome::new(&json!({ "comparison": c }), format!("{c:?}"), exit)
        }
        VerdictCmd::Check { verdict } => {
            let v: Verdict = read_json(verdict)?;
            match replay(&v) {
                Ok(r) => Outcome::ok(&json!({ "valid": true, "replayed": r }), "derivation replays"),
                Err(e) => Outcome::new(
                    &json!({ "valid": false, "reason": e.to_string() }),
                    format!("derivation rejected: {e}"),
                    Exit::Negative,
                ),
            }
        }
        VerdictCmd::Rules => {
            let text = rules()
                .iter().map(|r| format!("{}  {}", r.id, r.statement)).collect::<Vec<_>>().join("\n");
            Outcome::ok(&json!({ "rules": rules(), "disclaimer": DISCLAIMER }), format!("{text}\n{DISCLAIMER}"))
        }
    }
}
