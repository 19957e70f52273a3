mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Global};
use output::{write_json, CliError, Exit, Outcome};

fn report(g: &Global, argv: &[String], o: &Outcome) -> serde_json::Value {
    json!({
        "command": argv,
        "provenance": {
            "version": env!("CARGO_PKG_VERSION"),
            "field": g.field,
            "seed": g.seed,
            "max_cosets": g.max_cosets,
            "max_degree": g.max_degree,
            "x_max": g.x_max,
        },
        "exit": o.exit as u8,
        "result": o.value,
    })
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    Exit::Input.into()
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim().to_string())),
    };
    let g = &cli.global;
    let outcome = match commands::dispatch(&cli) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let value = if g.report {
        report(g, &argv[1..], &outcome)
    } else {
        outcome.value.clone()
    };
    if let Some(path) = &g.out {
        if let Err(e) = write_json(path, &value) {
            return fail(&e);
        }
    }
    if g.json || g.report {
        println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
    } else {
        println!("{}", outcome.text);
    }
    outcome.exit.into()
}
