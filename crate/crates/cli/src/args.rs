use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use sinelcm::identities::EquationId;

use crate::oeis::{BASE_ENV, DEFAULT_BASE};

#[derive(Debug, Parser)]
#[command(name = "sinelcm", version, about = "Certified sine, cosine and Gamma product routes to lcm(1..n)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Worker threads for verify/bench (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,

    /// Precision ceiling in bits for the retry loop.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(64..))]
    pub max_bits: Option<u32>,

    /// Directory for cached b-files.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Base URL for b-file downloads.
    #[arg(long, global = true, env = BASE_ENV, default_value = DEFAULT_BASE, hide = true)]
    pub oeis_base: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Product of prime powers.
    Oracle,
    /// Sine product over the Farey half range.
    Sine,
    /// Gamma product over the Farey interior.
    Gamma,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute lcm(1..n).
    Lcm {
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Oracle)]
        method: Method,
        /// Fix the working precision instead of planning it.
        #[arg(long, value_parser = clap::value_parser!(u32).range(64..))]
        bits: Option<u32>,
    },
    /// Check one identity over a range of n.
    Verify {
        #[arg(value_parser = parse_equation)]
        equation: EquationId,
        /// First n (default: start of the identity's validity window).
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: u64,
    },
    /// List the Farey sequence of order n.
    Farey {
        n: u64,
        /// Only the terms in (0, 1/2].
        #[arg(long)]
        half: bool,
    },
    /// Coefficients of the n-th cyclotomic polynomial, low degree first.
    Cyclo {
        n: u64,
        /// Evaluate at this integer instead.
        #[arg(long, allow_negative_numbers = true)]
        at: Option<i64>,
    },
    /// Compare an OEIS b-file against the exact oracle.
    OeisCheck {
        sequence: String,
        #[arg(long, default_value_t = 200)]
        upto: u64,
        /// Use the bundled fixture; no network, no cache.
        #[arg(long)]
        offline: bool,
        /// Ignore the cached copy and download again.
        #[arg(long, conflicts_with = "offline")]
        refresh: bool,
    },
    /// Per-n factor counts, precision and timings.
    Bench {
        #[arg(long, value_parser = parse_equation)]
        eq: EquationId,
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: u64,
    },
}

fn parse_equation(s: &str) -> Result<EquationId, String> {
    s.parse::<EquationId>().map_err(|e| {
        let known: Vec<&str> = EquationId::ALL.iter().map(|e| e.as_str()).collect();
        format!("{e}; known: {}", known.join(", "))
    })
}
