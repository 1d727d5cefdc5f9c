//! `perron`: digit-power-sum sets of Perron numbers from the command line.
//!
//! Exit codes: 0 success, 1 not a Perron number, 2 undecided, 3 invalid
//! input, 4 resource cap reached.

mod commands;
mod emit;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use emit::Format;

#[derive(Parser, Debug)]
#[command(name = "perron", version, about = "Digit-power-sum sets of Perron numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Conjugates, ⌊θ⌋ and the Perron verdict.
    Check,
    /// #D_n and growth ratios for n = 1..N.
    Count,
    /// Shortest relation Σ c_k θ^k = 0 with |c_k| ≤ ⌊θ⌋.
    Witness,
    /// Minimal gap of D_n for n = 1..N.
    Gap,
    /// Traces α_k and α_k/θ^k.
    Traces,
    /// Angular averages of a non-real conjugate.
    Angular,
    /// Partial sums of Re(θ_j^k).
    Powersum,
    /// Greedy expansion of --x, or the quasi-greedy expansion of 1.
    Expand,
    /// Admissible-word counts against #D_n.
    Admissible,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Polynomial, e.g. "x^2 - x - 1" or "[-1,-1,1]".
    #[arg(long, global = true)]
    pub poly: Option<String>,
    /// Largest level / index.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, default_value_t = 256)]
    pub precision: u32,
    /// Memory budget, e.g. 512M or 2G.
    #[arg(long, global = true, default_value = "1G")]
    pub memory: String,
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long = "state-cap", global = true)]
    pub state_cap: Option<usize>,
    #[arg(long = "max-depth", global = true)]
    pub max_depth: Option<usize>,
    /// Conjugate index j (1-based).
    #[arg(long, global = true)]
    pub conjugate: Option<usize>,
    /// Point of Q(θ) in power-basis coordinates, e.g. "[1/2,0]".
    #[arg(long, global = true)]
    pub x: Option<String>,
}

/// Parses `1024`, `64k`, `512M`, `2G` (binary multiples).
pub fn parse_memory(text: &str) -> Option<u64> {
    let t = text.trim();
    let (digits, shift) = match t.chars().last()? {
        'k' | 'K' => (&t[..t.len() - 1], 10),
        'm' | 'M' => (&t[..t.len() - 1], 20),
        'g' | 'G' => (&t[..t.len() - 1], 30),
        _ => (t, 0),
    };
    digits.parse::<u64>().ok()?.checked_mul(1 << shift)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(cli.command, &cli.config);
    if let Some(body) = &outcome.body {
        let written = match &cli.config.out {
            Some(path) => std::fs::write(path, body),
            None => std::io::stdout().write_all(body.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(3);
        }
    }
    if let Some(message) = &outcome.message {
        eprintln!("{message}");
    }
    ExitCode::from(outcome.code)
}
