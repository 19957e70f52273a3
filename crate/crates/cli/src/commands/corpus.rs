use std::path::Path;

use grl_core::groups::Presentation;
use grl_core::verdict::np_verdict;
use serde::Serialize;

use super::group::budget;
use crate::args::Global;
use crate::output::{read_json, CliError, Outcome};

#[derive(Serialize)]
pub struct Row {
    pub file: String,
    pub generators: Option<usize>,
    pub relators: Option<usize>,
    pub group: Option<String>,
    pub conclusion: Option<String>,
    pub lower: Option<String>,
    pub upper: Option<String>,
    pub error: Option<String>,
}

impl Row {
    fn blank(file: String) -> Self {
        Row {
            file,
            generators: None,
            relators: None,
            group: None,
            conclusion: None,
            lower: None,
            upper: None,
            error: None,
        }
    }
}

fn row(path: &Path, n: usize, g: &Global) -> Row {
    let mut r = Row::blank(path.file_name().unwrap_or_default().to_string_lossy().into_owned());
    let p: Presentation = match read_json(path) {
        Ok(p) => p,
        Err(e) => {
            r.error = Some(e.to_string());
            return r;
        }
    };
    r.generators = Some(p.generator_count());
    r.relators = Some(p.relators().len());
    match np_verdict(&p, n, budget(g)) {
        Ok(v) => {
            r.group = Some(format!("{:?}", v.group_fact).to_lowercase());
            r.conclusion = Some(format!("{:?}", v.conclusion).to_lowercase());
            r.lower = Some(v.lower.to_string());
            r.upper = Some(v.upper.to_string());
        }
        Err(e) => r.error = Some(e.to_string()),
    }
    r
}

fn cell(v: &Option<impl ToString>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

/// Rows are ordered by file name.
pub fn run(dir: &Path, n: usize, g: &Global) -> Result<Outcome, CliError> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut files: Vec<_> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let rows: Vec<Row> = files.iter().map(|f| row(f, n, g)).collect();
    let mut text = String::from("file\tgenerators\trelators\tgroup\tconclusion\tlower\tupper\terror");
    for r in &rows {
        text.push_str(&format!(
            "\n{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.file,
            cell(&r.generators),
            cell(&r.relators),
            cell(&r.group),
            cell(&r.conclusion),
            cell(&r.lower),
            cell(&r.upper),
            cell(&r.error)
        ));
    }
    Outcome::ok(&rows, text)
}
