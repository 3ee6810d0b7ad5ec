use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffdecomp_core::decomp::{SearchLimits, SearchMode};
use ffdecomp_core::experiments::DEFAULT_EPSILON;

use crate::family::{ElementList, SetSpec};
use crate::record::Format;

#[derive(Debug, Parser)]
#[command(
    name = "ffdecomp",
    version,
    about = "Additive decompositions and character-sum bounds over prime fields"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Threads for search partitions and sweep instances.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write records here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Directory for cached discrete-log tables.
    #[arg(long, global = true, env = "FFDECOMP_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Build field tables in memory only.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,

    /// Zero timestamps and elapsed times so output is byte-stable.
    #[arg(long, global = true)]
    pub reproducible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Decomposition,
    #[value(alias = "self", alias = "self_decomposition")]
    SelfDecomposition,
    Packing,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Decomposition => SearchMode::Decomposition,
            ModeArg::SelfDecomposition => SearchMode::SelfDecomposition,
            ModeArg::Packing => SearchMode::Packing,
        }
    }
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    #[arg(long)]
    pub node_budget: Option<u64>,

    /// Seconds.
    #[arg(long)]
    pub time_budget: Option<f64>,

    /// Drop the default node and time budgets.
    #[arg(long)]
    pub unbounded: bool,

    #[arg(long)]
    pub max_b_size: Option<usize>,

    #[arg(long)]
    pub max_witnesses: Option<usize>,
}

impl BudgetArgs {
    pub fn limits(&self) -> SearchLimits {
        let mut limits = if self.unbounded {
            SearchLimits::unbounded()
        } else {
            SearchLimits::default()
        };
        if self.node_budget.is_some() {
            limits.node_budget = self.node_budget;
        }
        if self.time_budget.is_some() {
            limits.time_budget = self.time_budget;
        }
        limits.max_b_size = self.max_b_size;
        if let Some(k) = self.max_witnesses {
            limits.max_witnesses = k;
        }
        limits
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for S = A + B, S = A + A, or a maximal packing A + B ⊆ S.
    Search {
        #[arg(long)]
        prime: u64,
        /// qr, subgroup:D, primroots, interval:M,N, or {a,b,...}
        #[arg(long)]
        set: SetSpec,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModeArg::Decomposition)]
        mode: ModeArg,
        /// Minimum part size (default 2; 1 for self and packing modes).
        #[arg(long)]
        min_size: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Maximal packing in G_d with the #A·#B ≤ p check, or in any --set.
    Packing {
        #[arg(long)]
        prime: u64,
        #[arg(long, required_unless_present = "set", conflicts_with = "set")]
        d: Option<u32>,
        #[arg(long)]
        set: Option<SetSpec>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Weil bound for χ(F(x)) summed over F_p.
    Weil {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        /// Character index j of χ_j in the order-d family.
        #[arg(long, default_value_t = 1)]
        chi: u32,
        /// Coefficients, constant term first: `1,0,1` = 1 + x².
        #[arg(long)]
        poly: String,
    },
    /// Double character sum against √(p·#A·#B).
    Vinogradov {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        chi: u32,
        #[arg(long)]
        a_set: SetSpec,
        #[arg(long)]
        b_set: SetSpec,
    },
    /// Ratio of the double character sum to the Karatsuba envelope.
    Karatsuba {
        #[arg(long)]
        prime: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        chi: u32,
        #[arg(long, default_value_t = 1)]
        nu: u32,
        #[arg(long)]
        a_set: SetSpec,
        #[arg(long)]
        b_set: SetSpec,
    },
    /// The counting sum W evaluated three ways.
    Wsum {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        d: u32,
        /// The shift set B.
        #[arg(long)]
        shifts: ElementList,
    },
    /// The count N by enumeration and by characters.
    Nsum {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        shifts: ElementList,
    },
    /// Size of ⋂(G_d + b_i) against the intersection bound.
    Shkvyu {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        d: u32,
        /// Number of shifts; drawn at random from --seed when --shifts is absent.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        shifts: Option<ElementList>,
    },
    /// Growth exponent log #(G(G+1)) / log #G.
    Growth {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Products ab landing in the interval {m+1, …, m+n}.
    Interval {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a_set: SetSpec,
        #[arg(long)]
        b_set: SetSpec,
    },
    /// #(8AB − 8AB) against min{#A#B, p−1}/2.
    Bourgain {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        a_set: SetSpec,
        #[arg(long)]
        b_set: SetSpec,
    },
    /// Run a JSON-configured experiment grid.
    Sweep { config: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Search { .. } => "search",
            Command::Packing { .. } => "packing",
            Command::Weil { .. } => "weil",
            Command::Vinogradov { .. } => "vinogradov",
            Command::Karatsuba { .. } => "karatsuba",
            Command::Wsum { .. } => "wsum",
            Command::Nsum { .. } => "nsum",
            Command::Shkvyu { .. } => "shkvyu",
            Command::Growth { .. } => "growth",
            Command::Interval { .. } => "interval",
            Command::Bourgain { .. } => "bourgain",
            Command::Sweep { .. } => "sweep",
        }
    }
}
