use grl_core::handles::{
    build_n2, build_n4, build_np, core_group_status, end_connect_sum, framing_obstruction_group, product_with_t,
    synth_boundary_model, verify_contractible, ContractibilityOutcome, HomotopyLedger,
};
use grl_core::groups::Presentation;
use serde_json::json;

use super::group::{budget, triviality_exit};
use crate::args::{Global, HandleCmd};
use crate::output::{read_json, CliError, Exit, Outcome};

fn ledger_out(l: &HomotopyLedger) -> Result<Outcome, CliError> {
    let text = format!("half_dim {}  pi1 {}  homology {}", l.half_dim(), l.pi1(), l.homology());
    Outcome::ok(l, text)
}

pub fn run(cmd: &HandleCmd, g: &Global) -> Result<Outcome, CliError> {
    match cmd {
        HandleCmd::Model { file, n } => {
            let p: Presentation = read_json(file)?;
            ledger_out(&synth_boundary_model(&p, *n).map_err(CliError::compute)?)
        }
        HandleCmd::N2 { ledger } => {
            let l: HomotopyLedger = read_json(ledger)?;
            ledger_out(&build_n2(&l).map_err(CliError::compute)?)
        }
        HandleCmd::N4 { ledger } => {
            let l: HomotopyLedger = read_json(ledger)?;
            ledger_out(&build_n4(&product_with_t(&l)).map_err(CliError::compute)?)
        }
        HandleCmd::Np { file, n } => {
            let p: Presentation = read_json(file)?;
            ledger_out(&build_np(&p, *n).map_err(CliError::compute)?)
        }
        HandleCmd::Sum { left, right } => {
            let (a, b): (HomotopyLedger, HomotopyLedger) = (read_json(left)?, read_json(right)?);
            ledger_out(&end_connect_sum(&a, &b).map_err(CliError::compute)?)
        }
        HandleCmd::Verify { ledger, core } => {
            let l: HomotopyLedger = read_json(ledger)?;
            if *core {
                let o = core_group_status(&l, budget(g)).map_err(CliError::compute)?;
                return Outcome::new(&o, format!("core group: {o:?}"), triviality_exit(&o));
            }
            let o = verify_contractible(&l, budget(g)).map_err(CliError::compute)?;
            let exit = match o {
                ContractibilityOutcome::Certified => Exit::Success,
                ContractibilityOutcome::HomologyObstruction { .. } | ContractibilityOutcome::Pi1Nontrivial { .. } => {
                    Exit::Negative
                }
                ContractibilityOutcome::Pi1Unknown => Exit::Unknown,
            };
            Outcome::new(&o, format!("{o:?}"), exit)
        }
        HandleCmd::Framing { sphere_dim, rank } => {
            let group = framing_obstruction_group(*sphere_dim, *rank);
            Outcome::ok(
                &json!({ "sphere_dim": sphere_dim, "bundle_rank": rank, "group": group }),
                group.to_string(),
            )
        }
    }
}
