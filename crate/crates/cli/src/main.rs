mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Polynomial-code, quantum-code and duadic-code computations.
#[derive(Debug, Parser)]
#[command(name = "qcodes", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Euclidean,
    Hermitian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Subcode,
    Lengthen,
    Puncture,
    DistanceDrop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    #[value(name = "I")]
    I,
    #[value(name = "III")]
    Iii,
    #[value(name = "IV")]
    Iv,
}

#[derive(Debug, Clone, Args)]
pub struct Setting {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub q: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub m: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Selection {
    #[command(flatten)]
    pub setting: Setting,
    /// max(S): the selection is every coset representative up to this value.
    #[arg(long)]
    pub cutoff: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cyclotomic cosets of q modulo m and the representative set A.
    Cosets(Setting),
    /// Generator matrix of C(S).
    Construct(Selection),
    /// Compare the matrix-level dual of C(S) with the predicted C(R).
    DualCheck {
        #[command(flatten)]
        selection: Selection,
        #[arg(long, value_enum, default_value_t = Mode::Hermitian)]
        mode: Mode,
    },
    /// Minimum distance: exact within the budget, otherwise sampled.
    Mindist {
        #[arg(long, requires_all = ["m", "cutoff"])]
        q: Option<u64>,
        #[arg(long, requires_all = ["q", "cutoff"])]
        m: Option<u64>,
        #[arg(long, requires_all = ["q", "m"])]
        cutoff: Option<u64>,
        /// Code JSON as written by `construct`.
        #[arg(long, conflicts_with_all = ["q", "m", "cutoff"], required_unless_present = "q")]
        input: Option<std::path::PathBuf>,
        /// Maximum number of projective codewords to enumerate.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quantum codes from every admissible cutoff.
    QuantumTable {
        #[command(flatten)]
        setting: Setting,
        /// Keep only the largest k for each distance bound >= 2.
        #[arg(long)]
        pareto: bool,
    },
    /// Apply a propagation rule to [[n,k,>=d]]_base.
    Propagate {
        #[arg(long)]
        base: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum)]
        rule: RuleArg,
        #[arg(long, default_value_t = 1)]
        steps: u32,
    },
    /// Duadic splitting, cyclotomic factors and their orders.
    Duadic {
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Quantum synchronizable code parameters from factor multiplicities.
    Sync {
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        v: Vec<usize>,
        /// Report constraint violations instead of rejecting them.
        #[arg(long)]
        relaxed: bool,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
    },
    /// Order of a binary polynomial given in hex (bit i = coefficient of x^i).
    PolyOrder {
        #[arg(long)]
        hex: String,
        /// A known multiple of the order; otherwise search up to --limit.
        #[arg(long)]
        multiple: Option<u64>,
        #[arg(long, default_value_t = 1 << 24)]
        limit: u64,
    },
    /// Recompute an embedded table and compare row by row.
    Reproduce {
        #[arg(long, value_enum)]
        table: TableArg,
    },
}

fn configure_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("QCODES_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
