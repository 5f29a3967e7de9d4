use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::Format;

#[derive(Debug, Parser)]
#[command(
    name = "underapprox",
    version,
    about = "Egyptian-fraction underapproximations and Sylvester-type limits"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "UNDERAPPROX_FORMAT")]
    pub format: Option<Format>,
    /// Decimal digits for limits.
    #[arg(long, global = true, env = "UNDERAPPROX_DIGITS")]
    pub digits: Option<u32>,
    /// Most sequence terms materialized.
    #[arg(long, global = true, env = "UNDERAPPROX_TERM_CAP")]
    pub term_cap: Option<usize>,
    /// Largest divergence index for the construction.
    #[arg(long, global = true, env = "UNDERAPPROX_CLAIM_CAP")]
    pub claim_cap: Option<usize>,
    /// Branch-and-bound node budget.
    #[arg(long, global = true, env = "UNDERAPPROX_NODE_CAP")]
    pub node_cap: Option<u64>,
    /// Result cache file for best-under and probe-greedy.
    #[arg(long, global = true, env = "UNDERAPPROX_CACHE_PATH")]
    pub cache_path: Option<PathBuf>,
    /// Neither read nor write the result cache.
    #[arg(long, global = true, env = "UNDERAPPROX_NO_CACHE")]
    pub no_cache: bool,
    /// Run searches on one thread.
    #[arg(long, global = true, env = "UNDERAPPROX_SEQUENTIAL")]
    pub sequential: bool,
    /// TOML file with defaults for the options above.
    #[arg(long, global = true, env = "UNDERAPPROX_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite greedy expansion of p/q.
    GreedyApprox { lambda: String },
    /// First terms of the greedy underapproximation of p/q.
    GreedyUnder {
        lambda: String,
        #[arg(long, default_value_t = 5)]
        terms: usize,
    },
    /// Split p/q into its finite greedy part and unit-fraction tail.
    Decompose { lambda: String },
    /// Orbit of a seed under s -> s^2 - s + 1.
    Sylvester {
        #[arg(long, default_value = "2")]
        seed: String,
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// Build the sequence c from a sequence a with reciprocal sum 1.
    Construct {
        /// SeqSpec JSON, inline or as a file path.
        spec: Option<String>,
        /// Generated competitor `S,DELTA` instead of a spec.
        #[arg(long, conflicts_with = "spec")]
        competitor: Option<String>,
        /// Also evaluate the limit of c.
        #[arg(long)]
        limit: bool,
    },
    /// lim c_n^(1/2^n) for an eventually Sylvester SeqSpec.
    Limit {
        /// SeqSpec JSON, inline or as a file path.
        spec: String,
    },
    /// Sylvester's growth constant.
    Vardi,
    /// Best n-term underapproximation of p/q.
    BestUnder {
        lambda: String,
        #[arg(long, default_value_t = 2)]
        terms: usize,
        /// Collect every optimal tuple and report uniqueness.
        #[arg(long)]
        all_ties: bool,
    },
    /// Whether optimal witnesses extend greedily, for n up to --terms.
    ProbeGreedy {
        theta: String,
        #[arg(long, default_value_t = 4)]
        terms: usize,
    },
    /// Exact checks of the two claims for a range of m, e.g. `1..6`.
    CheckClaims {
        #[arg(long)]
        m: Option<String>,
    },
    /// The two divisibility conditions on a reduced p/q.
    Conditions { fraction: String },
}
