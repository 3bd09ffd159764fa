use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "upcheck", version, about = "Linear numeration systems and ultimately periodic sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Built-in system name or path to a system file.
    #[arg(long, global = true)]
    pub system: Option<String>,
    /// Numeration-language DFA file (default: built automatically).
    #[arg(long, global = true)]
    pub lang: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Enable the slow tier (longer horizons and checks).
    #[arg(long, global = true)]
    pub slow: bool,
    /// Exit with status 4 when a verdict is inconclusive because of a cap.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Horizon for sequence-based checks.
    #[arg(long, global = true, default_value_t = 200)]
    pub horizon: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print U_0 .. U_n.
    Seq {
        #[arg(short = 'n', default_value_t = 10)]
        n: usize,
    },
    /// Greedy representation of a non-negative integer.
    Rep {
        value: String,
        /// Left-pad with zeros to this length.
        #[arg(long)]
        padded: Option<usize>,
    },
    /// Value of a digit word (digits concatenated, or separated by dots).
    Val { word: String },
    /// Gap hypotheses and the constants G, R, C, Z.
    CheckHypotheses {
        /// State count C of the language automaton (default: computed).
        #[arg(long)]
        c: Option<usize>,
    },
    /// Numeration-language DFA.
    LangDfa {
        /// `auto`, `bertrand`, `learn` or `user:FILE`.
        #[arg(long, default_value = "auto")]
        source: String,
    },
    /// DFA for the values congruent to r modulo Q.
    Congruence {
        #[arg(short = 'Q')]
        q: u64,
        #[arg(short = 'r', default_value_t = 0)]
        r: u64,
    },
    /// Largest minimal state count among the Q residue-class machines.
    Gamma {
        #[arg(short = 'Q')]
        q: u64,
    },
    /// Period-bound report for a DFA.
    Bounds {
        #[arg(long)]
        dfa: PathBuf,
        #[command(flatten)]
        certs: CertArgs,
    },
    /// Decide whether the DFA accepts an ultimately periodic set.
    Decide {
        #[arg(long)]
        dfa: PathBuf,
        #[command(flatten)]
        certs: CertArgs,
        #[arg(long, default_value_t = 4096)]
        cap_period: u64,
        #[arg(long, default_value_t = 2_000_000)]
        cap_states: usize,
    },
    /// p-adic valuations of sequence terms as `i<TAB>v` rows.
    PadicVal {
        #[arg(short = 'p')]
        p: u32,
        /// `i`, `a..b` (inclusive) or `a-b`.
        #[arg(short = 'i')]
        range: String,
        #[arg(long, default_value_t = 128)]
        precision: u64,
    },
    /// The 2-adic constant of the toy recurrence.
    Zeta {
        #[arg(long, default_value_t = 50)]
        precision: u64,
    },
    /// Compare the closed form for ν_2 with direct valuations.
    CheckNu2 {
        #[arg(long, default_value_t = 4096)]
        max: u64,
    },
    /// Zero-block statistics of the 2-adic constant.
    Blocks {
        #[arg(long, default_value_t = 1100)]
        precision: u64,
        /// Number of leading digits examined.
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Check known ν_2 peaks of the variant sequence (more with --slow).
    Peaks,
    /// Reduce a DFA over a merge-form system to an integer base.
    Reduce {
        #[arg(long)]
        dfa: PathBuf,
    },
    /// Membership bits of 0..=n, or of random values with --sample.
    Oracle {
        #[arg(long)]
        dfa: PathBuf,
        #[arg(short = 'n', default_value_t = 100)]
        n: u64,
        /// Test this many random values below 10^12 instead.
        #[arg(long)]
        sample: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CertArgs {
    /// Certificate file, or `auto` / `none`.
    #[arg(long, default_value = "auto")]
    pub certs: String,
}
