use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "umps",
    version,
    about = "Linear spans, characters and trace relations of uniform matrix product states"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Rank computation: multi-modular with exact fallback, or exact only.
    #[arg(long, value_enum, default_value_t = Mode::Modular, global = true)]
    pub mode: Mode,
    /// Primes for modular rank are taken just below 2^BITS.
    #[arg(long, default_value_t = 61, value_parser = clap::value_parser!(u32).range(3..=63), global = true)]
    pub prime_bits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, env = "UMPS_THREADS", default_value_t = 1, global = true)]
    pub threads: usize,
    /// Print wall-clock time to stderr.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Largest word length accepted by the trace parametrization.
    #[arg(long, default_value_t = 24, global = true)]
    pub max_length: usize,
    /// Largest number of generator rows in a single rank computation.
    #[arg(long, default_value_t = 200_000, global = true)]
    pub max_rows: u128,
    /// Largest m^2 * n * d for generic symbolic traces.
    #[arg(long, default_value_t = 256, global = true)]
    pub max_symbolic_size: u128,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Modular,
    Exact,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    TraceParam,
    Generic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Necklace,
    Bracelet,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmbientArg {
    Cyclic,
    Dihedral,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Symbolic,
    Randomized,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// m = 2, l = 2 with A_0 = 1, A_1 = 11, A_2 = 01, B = 0 (binary, d = 8).
    ExampleD8,
    /// A_0 = 0, B = 1, A_i = 2 (ternary).
    Corollary,
    /// l = m, A_0 = 0 1^(m+1) 0, B = 1, A_i = 0 (binary).
    Remark,
    /// Weight-3 rewriting of 1 0^a 1 0^b 1 0^c.
    W3,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Necklace and bracelet counts, closed form and by enumeration.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Number of 1s for n = 2, or a comma-separated weight vector.
        #[arg(long)]
        w: Option<String>,
    },
    /// List necklace or bracelet representatives.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        w: Option<String>,
        #[arg(long, value_enum, default_value_t = Kind::Bracelet)]
        kind: Kind,
    },
    /// Character of the linear span of uMPS(m, n, d).
    Character {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum)]
        source: Option<Source>,
        /// Print every weight rather than the table row.
        #[arg(long)]
        all_weights: bool,
        /// Only compute weights up to this many 1s (binary case).
        #[arg(long)]
        max_weight: Option<usize>,
    },
    /// Weight-space dimensions of the degree-k part of the ideal of uMPS(2, 2, d).
    Ideal {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_weight: Option<usize>,
    },
    /// Check the Cayley–Hamilton trace relation.
    VerifyCh {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        /// Check the trailing-power example for every k instead.
        #[arg(long)]
        example: bool,
        #[arg(long, value_enum)]
        check: Option<Check>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Flip the sign of this term first (negative control).
        #[arg(long)]
        perturb: Option<usize>,
    },
    /// Substitute words for the letters of the relation.
    Substitute {
        #[command(flatten)]
        rel: RelationArgs,
    },
    /// Decide whether a substituted relation is nontrivial and vanishes on the span.
    Certify {
        #[command(flatten)]
        rel: RelationArgs,
        /// Expected word length.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum)]
        ambient: Option<AmbientArg>,
    },
    /// Compare computed characters with the closed-form conjectures.
    Conjecture {
        /// A length or a range such as 8..14.
        #[arg(long)]
        d: String,
    },
    /// Write the trace parametrization of all bracelets of length d.
    DumpTraceParam {
        #[arg(long)]
        d: usize,
        /// Write the weight-w coefficient matrix in Matrix Market format instead.
        #[arg(long)]
        matrix_market: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RelationArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Matrix size of the relation.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    /// Words substituted for A_0, .., A_m, B, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub map: Option<Vec<String>>,
    /// Alphabet size of the substituted words.
    #[arg(long)]
    pub n: Option<usize>,
    /// Gap parameters of the weight-3 preset.
    #[arg(long)]
    pub a: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    #[arg(long)]
    pub c: Option<usize>,
}
