use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Cellular automata toolkit: simulation, constructions, languages, the
/// firing squad and its history recognizer.
#[derive(Parser, Debug)]
#[command(name = "ca", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a rule and render the space-time diagram.
    Simulate(SimulateArgs),
    /// Emit a constructed rule as a rule file.
    #[command(subcommand)]
    Build(BuildCommand),
    /// Column factors and their 2-approximation.
    Trace(TraceArgs),
    /// Finite-time image languages and the limit chain.
    Limit(LimitArgs),
    /// The firing squad.
    #[command(subcommand)]
    Fs(FsCommand),
    /// Membership in the set of configurations with a valid past.
    #[command(subcommand)]
    Xs(XsCommand),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct Output {
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Render {
    Ascii,
    Pgm,
    Text,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Builtin name (shift, identity, min, elementary:<n>, fs) or rule file.
    #[arg(long)]
    pub rule: String,
    /// Periodic configuration given by one period.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub periodic: Option<String>,
    /// Presented configuration `ω(left) center (right)ω`.
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Render::Ascii)]
    pub render: Render,
    /// First cell of the window.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<i64>,
    /// One past the last cell of the window.
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<i64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Subcommand, Debug)]
pub enum BuildCommand {
    /// Trace-hiding extension over {-1,0,+1} x C.
    Tilde {
        #[arg(long)]
        base: String,
        #[command(flatten)]
        output: Output,
    },
    /// Add a spreading symbol ⊥.
    Spread {
        #[arg(long)]
        base: String,
        #[command(flatten)]
        output: Output,
    },
    /// Squad-frozen extension over A ⊔ (A x Q).
    Delta {
        /// Rule with a spreading state.
        #[arg(long)]
        base: String,
        #[arg(long, default_value = "fs")]
        squad: String,
        /// Spreading state of the base (default: its first spreading state).
        #[arg(long)]
        zero: Option<String>,
        #[arg(long, default_value = "κ")]
        killer: String,
        #[arg(long, default_value = "γ")]
        firing: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    #[arg(long)]
    pub rule: String,
    /// Window width.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Column depth.
    #[arg(long = "T", default_value_t = 3)]
    pub depth: usize,
    /// Print the 2-approximation graph as `u -> v` lines.
    #[arg(long, conflicts_with = "check")]
    pub graph: bool,
    /// Compare the depth-T paths of the graph with the columns.
    #[arg(long)]
    pub check: bool,
    /// Count depth-T paths of a graph read from this file.
    #[arg(long, conflicts_with_all = ["graph", "check"])]
    pub paths_of: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Enumerate,
    Automaton,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[arg(long)]
    pub rule: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub t: usize,
    /// Print the chain of word counts for every time up to t.
    #[arg(long)]
    pub chain: bool,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    pub strategy: StrategyArg,
    /// Compare with a language sample read from this file.
    #[arg(long)]
    pub against: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum HistoryRender {
    Ascii,
    Pgm,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum FsCommand {
    /// Print the shipped rule file.
    Rule {
        #[command(flatten)]
        output: Output,
    },
    /// When and how ω(#B^n)ω fires.
    Fire {
        #[arg(long)]
        n: usize,
        /// Steps to run (default: the firing time 2n+1).
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// The doubling chain from ω(#B^(2^j-1))ω down to firing.
    Chain {
        #[arg(long)]
        j: u32,
    },
    /// History diagram of the orbit of ω(#B^n)ω, most recent row first.
    History {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steps: usize,
        /// Window width in cells (default: two periods plus one).
        #[arg(long)]
        width: Option<usize>,
        #[arg(long, value_enum, default_value_t = HistoryRender::Ascii)]
        render: HistoryRender,
        #[command(flatten)]
        output: Output,
    },
    /// Whether a word has a backward history of depth T avoiding κ and γ.
    Reach {
        word: String,
        #[arg(long = "T", default_value_t = 6)]
        depth: usize,
    },
    /// Period schema of ω(#B^n)ω after t steps.
    Schema {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum XsCommand {
    /// Decide a word.
    Recognize {
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide the configuration `ω(left) center (right)ω`.
    Classify {
        left: String,
        center: String,
        right: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare the recognizer with the backward oracle on all short words.
    Crosscheck {
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long = "T", default_value_t = 6)]
        depth: usize,
        /// Also list every word.
        #[arg(long)]
        lines: bool,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    #[value(name = "tilde-sft2")]
    TildeSft2,
    #[value(name = "delta-limfs")]
    DeltaLimfs,
    #[value(name = "limsim")]
    Limsim,
    #[value(name = "fs-contract")]
    FsContract,
    #[value(name = "xs-crosscheck")]
    XsCrosscheck,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Base rule (tilde-sft2, delta-limfs).
    #[arg(long)]
    pub base: Option<String>,
    /// Window widths (tilde-sft2).
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    /// Largest depth (tilde-sft2, fs-contract, xs-crosscheck).
    #[arg(long = "T")]
    pub depth: Option<usize>,
    /// Word length (delta-limfs, limsim, fs-contract, xs-crosscheck).
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest time (delta-limfs, limsim).
    #[arg(long)]
    pub t: Option<usize>,
    /// First and second rule of the product (limsim).
    #[arg(long, num_args = 2, value_names = ["FIRST", "SECOND"])]
    pub product: Vec<String>,
    /// Longest pure word (delta-limfs).
    #[arg(long)]
    pub pure_len: Option<usize>,
    /// Largest time for pure words (delta-limfs).
    #[arg(long)]
    pub pure_t: Option<usize>,
    /// Largest exponent of the spacing set (fs-contract).
    #[arg(long)]
    pub max_j: Option<u32>,
    /// Word length of the exhaustive factor-closure check (xs-crosscheck).
    #[arg(long)]
    pub closure_len: Option<usize>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub output: Output,
}
