mod corpus;
mod fds;
mod group;
mod handle;
mod verdict;

use crate::args::{Cli, Command};
use crate::output::{CliError, Outcome};

pub fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Fds(c) => fds::run(c, g),
        Command::Group(c) => group::run(c, g),
        Command::Handle(c) => handle::run(c, g),
        Command::Verdict(c) => verdict::run(c, g),
        Command::Corpus { dir, n } => corpus::run(dir, *n, g),
    }
}
