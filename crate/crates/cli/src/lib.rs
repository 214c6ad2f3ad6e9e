//! Command-line front end. Every command writes JSON-lines records carrying
//! the command name, its parameters, exact dimensions, ratios as `"num/den"`
//! strings, pass flags and `wall_time_us`.
//!
//! Exit status: 0 when every record passes, 2 on parse or validation
//! errors, 3 when a checked invariant fails.

mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{Map, Value};

use almostfin::exactlin::Field;
use almostfin::Result;

pub use config::{Config, Resolved};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    FolnerScan,
    AlmostrepBuild,
    Amplify,
    Tensor,
    Paradox,
    AuditRank,
    CommutatorCheck,
    RrEstimate,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::FolnerScan => "folner-scan",
            Command::AlmostrepBuild => "almostrep-build",
            Command::Amplify => "amplify",
            Command::Tensor => "tensor",
            Command::Paradox => "paradox",
            Command::AuditRank => "audit-rank",
            Command::CommutatorCheck => "commutator-check",
            Command::RrEstimate => "rr-estimate",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "almostfin", version, about = "Exact almost finite-dimensional representations of algebras")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Ground field: gfp:P or rational.
    #[arg(long)]
    pub field: Option<Field>,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Displacement bound for graph commands.
    #[arg(long = "K")]
    pub k: Option<usize>,
    /// Seed of randomized suites.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write records here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub quiet: bool,
}

/// One output line.
#[derive(Clone, Debug, PartialEq)]
pub struct Record(pub Map<String, Value>);

impl Record {
    pub fn passed(&self) -> bool {
        self.0.get("pass").and_then(Value::as_bool).unwrap_or(true)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(&self.0).expect("records serialize")
    }
}

pub fn resolve(cli: &Cli) -> Result<Resolved> {
    let (cfg, base) = match &cli.config {
        Some(p) => (
            Config::load(p)?,
            p.parent().map(PathBuf::from).unwrap_or_default(),
        ),
        None => (Config::default(), PathBuf::from(".")),
    };
    Ok(Resolved {
        cfg,
        base,
        field: cli.field,
        n_max: cli.n_max,
        k: cli.k,
        seed: cli.seed,
    })
}

pub fn run(cli: &Cli) -> Result<Vec<Record>> {
    commands::dispatch(cli.command, &resolve(cli)?)
}

pub fn exit_code(records: &Result<Vec<Record>>) -> i32 {
    match records {
        Err(_) => EXIT_INVALID,
        Ok(rs) if rs.iter().all(Record::passed) => EXIT_OK,
        Ok(_) => EXIT_INVARIANT,
    }
}
