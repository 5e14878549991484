//! The `decnet` command line.
//!
//! [`run`] takes the argument list and the three standard streams, so the
//! binary and the tests drive exactly the same code.

mod commands;
mod output;
mod session;

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use decnet::Error;

pub use output::exit_code;

#[derive(Debug, Parser)]
#[command(name = "decnet", version, about = "Influence diagrams solved with belief-network inference")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Allowed deviation of a CPT row sum from 1.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct EvidenceArgs {
    /// Evidence binding `Name=state`; repeatable.
    #[arg(long = "evidence", short = 'e', value_name = "NAME=STATE")]
    pub evidence: Vec<String>,

    /// File with one `Name = state` binding per line.
    #[arg(long = "evidence-file", value_name = "PATH")]
    pub evidence_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Ve,
    Enum,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a network or diagram and list every violation.
    Validate {
        /// Path, or one of the bundled names fig1, fig2, fig3.
        file: String,
    },
    /// Exact posterior of one node.
    Infer {
        file: String,
        /// `Name` for the whole distribution or `Name=state` for one entry.
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t = EngineKind::Ve)]
        engine: EngineKind,
        #[command(flatten)]
        evidence: EvidenceArgs,
    },
    /// Compile an influence diagram into a belief network.
    Transform { file: String },
    /// Best alternative for the first remaining decision.
    Solve {
        file: String,
        #[command(flatten)]
        evidence: EvidenceArgs,
        /// Hypothetical value `Name=state` for an unobserved predecessor.
        #[arg(long = "hypothetical", value_name = "NAME=STATE")]
        hypothetical: Vec<String>,
    },
    /// Optimal alternative of every remaining decision at every reachable
    /// information state.
    Policy {
        file: String,
        #[command(flatten)]
        evidence: EvidenceArgs,
    },
    /// Logic-sampling estimate of one probability.
    Sample {
        file: String,
        /// `Name=state`.
        #[arg(long)]
        target: String,
        #[arg(short = 'n', long = "samples", default_value_t = 100_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        evidence: EvidenceArgs,
    },
    /// Choose the remaining decision by logic sampling.
    SampleSolve {
        file: String,
        #[arg(long, default_value_t = 1_000_000)]
        max_samples: u64,
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        #[arg(long, default_value_t = 1024)]
        batch: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        evidence: EvidenceArgs,
    },
    /// Interactive decision session on standard input.
    Session {
        file: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        evidence: EvidenceArgs,
    },
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, A, R, W, E>(args: I, input: &mut R, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
    R: BufRead,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match commands::dispatch(&cli, input, out) {
        Ok(code) => code,
        Err(e) => report_error(&cli, &e, out, err),
    }
}

fn report_error<W: Write, E: Write>(cli: &Cli, error: &Error, out: &mut W, err: &mut E) -> i32 {
    let code = exit_code(error);
    if cli.json {
        let body = serde_json::json!({ "error": error.to_string(), "exit_code": code });
        let _ = writeln!(out, "{body}");
    } else {
        let _ = writeln!(err, "error: {error}");
    }
    code
}
