mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use borel_tukey::Error;

/// Galois–Tukey calculus at desk scale.
#[derive(Parser, Debug)]
#[command(name = "btukey", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FormatArg {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the coded triples.
    Catalog(FormatArg),
    /// Van Douwen's diagram with its edge verdicts.
    Diagram {
        #[arg(long, default_value = "borel")]
        kind: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Is there a Borel morphism from s(n,m) to s(n',m')?
    Edge {
        n: u64,
        m: u64,
        n_prime: u64,
        m_prime: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Incomparability of s(2^m, m) for 3 ≤ m ≤ M.
    Antichain {
        max_m: u32,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Morphism between X- and Y-splitting triples; sets as `3,4,5` (or `-` for empty).
    Embed {
        x: String,
        y: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Elements of ψ(f) below a bound.
    Psi {
        #[arg(long)]
        f: String,
        #[arg(short = 'N', long = "bound")]
        bound: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Common elements of ψₙ(f₁), …, ψₙ(f_k), k ≤ n.
    Witnesses {
        #[arg(long)]
        n: usize,
        #[arg(long, num_args = 1.., required = true)]
        fs: Vec<String>,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// The exact intersection ψₙ(f₀) ∩ ⋯ ∩ ψₙ(fₙ).
    Intersect {
        #[arg(long)]
        n: usize,
        #[arg(long, num_args = 1.., required = true)]
        fs: Vec<String>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Bound every f whose ψₙ(f) contains the observed tuples.
    Bound {
        #[arg(long)]
        column: usize,
        /// JSON array of `{"nodes": [[…], …]}` tuples.
        #[arg(long)]
        obs: std::path::PathBuf,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run a refutation gadget against external candidate maps.
    Refute {
        #[arg(value_enum)]
        gadget: Gadget,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        psi: String,
        /// Relation for a2b.
        #[arg(long, value_enum, default_value = "not-ad")]
        relation: RelationArg,
        /// Three set literals for p2t.
        #[arg(long, num_args = 3)]
        sets: Option<Vec<String>>,
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Adversary sessions.
    Adversary {
        #[command(subcommand)]
        action: AdversaryAction,
    },
    /// Norm of a finite triple given as JSON.
    Norm {
        #[arg(long)]
        triple: std::path::PathBuf,
        #[arg(long)]
        property: Option<String>,
        #[command(flatten)]
        format: FormatArg,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Gadget {
    A2b,
    P2t,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RelationArg {
    NotAd,
    NotSubset,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuiltinMachine {
    Identity,
    AllOnes,
    AllZeros,
}

#[derive(Subcommand, Debug)]
pub enum AdversaryAction {
    /// Build a certificate against a machine speaking `QUERY <bits> <m>`.
    Run {
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        machine: Option<String>,
        #[arg(long, value_enum)]
        builtin: Option<BuiltinMachine>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        budget: usize,
        /// Also report the classes S_{n,r}, r < n.
        #[arg(long)]
        classes: Option<usize>,
        /// Set literals to split with the classes.
        #[arg(long, num_args = 1..)]
        targets: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
    },
}

/// Result of a verb that succeeded: yes, or a negative mathematical verdict.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Budget(_) | Error::Resource(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
