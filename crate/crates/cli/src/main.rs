//! `mergelab` command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mergelab::rates::GridAxis;
use mergelab::DEFAULT_BUDGET;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "mergelab", version, about = "Entanglement-coherence rate regions and exact merging simulations")]
pub struct Cli {
    /// Largest number of amplitudes or matrix entries a run may allocate.
    #[arg(long, global = true, env = "MERGELAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// State file on factors R, A, B.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Separable-family file.
    #[arg(long)]
    pub family: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CodeArgs {
    /// Block length.
    #[arg(long)]
    pub n: usize,
    /// Rate slack above H(X|Y).
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    /// Exact number of bins (overrides --delta).
    #[arg(long)]
    pub bins: Option<usize>,
    /// Random binnings tried; the best is kept.
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Builtin {
    Identity,
    Dephasing,
    Qft,
    FlowerDecode,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ZooKind {
    Flower,
    MaxEntangled,
    MaxCoherent,
    RandomPure,
    RandomMixed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rate bounds of a state or separable family.
    Rates {
        #[command(flatten)]
        source: Source,
    },
    /// Classify a grid of (E, C) pairs as CSV.
    Region {
        #[command(flatten)]
        source: Source,
        /// Two axes `E:min:max:step` and `C:min:max:step`.
        #[arg(long, num_args = 2, required = true)]
        grid: Vec<GridAxis>,
    },
    /// Block merging of a pure R,A,B state, or incoherent Schumacher
    /// compression of a single-system state.
    Merge {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        code: CodeArgs,
        /// Use this code file instead of building one.
        #[arg(long, conflicts_with_all = ["bins"])]
        code_file: Option<PathBuf>,
        /// Tolerance of the end-of-run bound checks.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Flower-state rates and the exact merging protocol.
    Flower {
        #[arg(long)]
        d: usize,
    },
    /// Merging of a separable family.
    Separable {
        #[arg(long)]
        family: PathBuf,
    },
    /// Build a Slepian-Wolf code from an `x,y,p` CSV distribution.
    Swcode {
        #[arg(long)]
        dist: PathBuf,
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Coherence classes of a channel.
    Miocheck {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        channel: Option<PathBuf>,
        #[arg(long, requires = "d")]
        builtin: Option<Builtin>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Minimum output entropy of the flower decoding channel.
    Uncertainty {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1000)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tensor power of the channel.
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// Emit a named state in the state-file format.
    Statezoo {
        kind: ZooKind,
        #[arg(long)]
        d: Option<usize>,
        /// Factors for random states, e.g. `R:2,A:2,B:2`.
        #[arg(long)]
        layout: Option<String>,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code(code: &str) -> u8 {
    match code {
        "parse" => 3,
        "layout" => 4,
        "dimension" => 5,
        "invalid_state" => 6,
        "invalid_operator" => 7,
        "invalid_parameter" => 8,
        "invalid_input" => 9,
        "budget_exceeded" => 10,
        "invariant_violation" => 11,
        "io" => 12,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.code();
            let body = json!({ "error": { "code": code, "message": e.to_string() } });
            eprintln!("{body}");
            ExitCode::from(exit_code(code))
        }
    }
}
