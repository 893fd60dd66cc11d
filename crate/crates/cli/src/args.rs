use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "diotuple", version, about = "Diophantine D(n)-tuples in imaginary quadratic fields")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutputMode::Table)]
    pub format: OutputMode,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that every pairwise product plus n is a square.
    Verify(VerifyArgs),
    /// Exhaustive norm-bounded search for k-tuples over a list of fields.
    Search(SearchArgs),
    /// Find the fourth elements d = (z² + 1)/c extending a D(−1) triple.
    Extend(ExtendArgs),
    /// Approximation constants, the m ≤ 36 inequality chain and its threshold.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
    /// Re-run one of the canned computations and compare with the expected outcome.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Worker threads for the scan targets.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Squarefree D > 0 selecting Q(√−D).
    #[arg(long = "D", allow_hyphen_values = true)]
    pub d: i64,
    /// The shift n, in element syntax.
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    /// Comma-separated elements, e.g. `1,2,5,-24` or `1+2*w,-3*w`.
    #[arg(long, allow_hyphen_values = true)]
    pub elems: String,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Inclusive range of D, as `lo..hi`; non-squarefree values are skipped.
    #[arg(long = "D-range", conflicts_with = "d_list", required_unless_present = "d_list")]
    pub d_range: Option<String>,
    /// Comma-separated list of squarefree D.
    #[arg(long = "D-list")]
    pub d_list: Option<String>,
    /// Inclusive bound on the norm of every element.
    #[arg(long)]
    pub max_norm: u64,
    /// Tuple size.
    #[arg(long)]
    pub k: usize,
    /// Rational shift n.
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write the JSON report here; a checkpoint is kept next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Continue from the checkpoint of an interrupted run with the same configuration.
    #[arg(long, requires = "out")]
    pub resume: bool,
    /// Search every root instead of one per symmetry class.
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    #[arg(long = "D", allow_hyphen_values = true)]
    pub d: i64,
    /// Comma-separated triple a,b,c.
    #[arg(long, allow_hyphen_values = true)]
    pub triple: String,
    /// Inclusive bound on the norm of z.
    #[arg(long)]
    pub z_norm_bound: u64,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCommand {
    /// Constants L, l, p, P, λ, c₁ for θᵢ = √(1 + aᵢ/T).
    Jz {
        #[arg(long = "D", default_value_t = 1)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        #[arg(long = "T", allow_hyphen_values = true)]
        t: String,
        /// Working precision in bits (default: $DIO_PRECISION_BITS or 128).
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Hypotheses of the upper bound on d for a triple a, b, c.
    Hypotheses {
        #[arg(long = "D", default_value_t = 1)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        triple: String,
    },
    /// θ approximation defects for a D(−1) quadruple a,b,c,d.
    Theta {
        #[arg(long = "D", default_value_t = 1)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        elems: String,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Exact six-step verification of the inequality chain.
    Chain,
    /// Minimal N with N⁸·13³¹ ≥ 66³¹·3956¹⁰.
    Threshold,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// No D(−1) quintuple with all norms ≤ 224 for squarefree D ≤ 225.
    QuintupleScan,
    /// No D(−1) quadruple with all norms ≤ 143 for squarefree D ≤ 225.
    QuadrupleMin,
    /// {1, 2, 5, −24} is a D(−1) quadruple in Z[i].
    ExampleQuadruple,
    /// The two D(−1) triples of Q(√−3) made of units, and their non-extendability.
    D3Triples,
}
