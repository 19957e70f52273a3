use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "grl", version, about = "Growth rates, group presentations and handle ledgers")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Print the result as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Wrap JSON output in a report with provenance.
    #[arg(long, global = true)]
    pub report: bool,
    /// Also write the result JSON to this file.
    #[arg(short, long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Field for generated systems: f2, q or fp:<prime>.
    #[arg(long, global = true, env = "GRL_FIELD", default_value = "f2")]
    pub field: String,
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_cosets: usize,
    #[arg(long, global = true, default_value_t = 5)]
    pub max_degree: usize,
    #[arg(long, global = true, default_value_t = 40)]
    pub x_max: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Filtered directed systems.
    #[command(subcommand)]
    Fds(FdsCmd),
    /// Finitely presented groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Homotopy ledgers and the handle pipeline.
    #[command(subcommand)]
    Handle(HandleCmd),
    /// Growth-rate verdicts.
    #[command(subcommand)]
    Verdict(VerdictCmd),
    /// One verdict row per presentation file in a directory.
    Corpus {
        dir: PathBuf,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
}

/// Either a symbolic profile or a system file.
#[derive(Args, Debug)]
pub struct Operands {
    /// Symbolic rank profiles: zero, bounded:c, poly:n, exp:b.
    #[arg(long = "profile")]
    pub profiles: Vec<String>,
    /// System files.
    pub files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RandomOr {
    /// Input file; omit together with --random to generate instances.
    pub file: Option<PathBuf>,
    /// Number of random instances drawn from --seed.
    #[arg(long)]
    pub random: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum FdsCmd {
    /// Exact growth rate of a profile, or an estimate for a system.
    Gamma(Operands),
    Tensor(Operands),
    Sum(Operands),
    /// Whether the first system is bigger than the second for constants (A, B, C).
    Bigger {
        v: PathBuf,
        w: PathBuf,
        #[arg(long, default_value = "1")]
        a: String,
        #[arg(long, default_value = "1")]
        b: String,
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// Collapse an exact triangle with a C-trivial third system.
    Les(RandomOr),
    /// Graded dominance for a filtered family.
    Filtration {
        #[command(flatten)]
        input: RandomOr,
        #[arg(long, default_value = "2")]
        m: String,
        #[arg(long, default_value = "2")]
        n: String,
    },
    /// Homology bound for a split family.
    Splitbound(RandomOr),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    H1 { file: PathBuf },
    Freeprod { files: Vec<PathBuf> },
    /// Coset enumeration.
    Tc { file: PathBuf },
    /// Search for a nontrivial permutation quotient.
    Quotient { file: PathBuf },
    /// Semidecide triviality.
    Trivial { file: PathBuf },
    /// Conjugacy class counts up to --x-max, e.g. `free:2` or `cyclic:2*cyclic:3`.
    Conjcount { class: String },
    Conjrate { class: String },
}

#[derive(Subcommand, Debug)]
pub enum HandleCmd {
    /// Homology-sphere model of a perfect presentation.
    Model {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    N2 { ledger: PathBuf },
    /// Product with the surface factor, then the top handle.
    N4 { ledger: PathBuf },
    Np {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    Sum { left: PathBuf, right: PathBuf },
    Verify {
        ledger: PathBuf,
        /// Decide the starting group instead of the ledger's own.
        #[arg(long)]
        core: bool,
    },
    Framing {
        #[arg(long)]
        sphere_dim: usize,
        #[arg(long)]
        rank: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerdictCmd {
    Np {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    Distinguish {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    Cn { verdict: PathBuf },
    /// Re-derive a stored verdict from its rule list.
    Check { verdict: PathBuf },
    /// List the rules and their status.
    Rules,
}
