use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "markoff", version, about = "Markoff maps, sink constants and trace systoles")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Sample budget for sampling verifiers.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: u64,
    /// Maximal number of moves in greedy descent.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub depth_cap: usize,
    /// Arithmetic for map values.
    #[arg(long, global = true, value_enum, default_value_t = Precision::Double)]
    pub precision: Precision,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Worker threads for sampling; results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    /// 200-bit binary floating point.
    High,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Output {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Roots of X³ − 3X² + μ.
    #[command(subcommand)]
    Root(RootCmd),
    /// GT map of four boundary traces.
    Gt {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(allow_hyphen_values = true)]
        d: String,
    },
    /// Evaluate, reduce or draw a Markoff map.
    #[command(subcommand)]
    Map(MapCmd),
    /// Sampling and grid checks of the sink bounds.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Trace systole constants.
    #[command(subcommand)]
    Tys(TysCmd),
    /// Matrix word traces against Markoff recursion values.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand, Debug)]
pub enum RootCmd {
    /// Dominant root t_μ and τ_μ = 1/t_μ.
    Dominant {
        #[arg(allow_hyphen_values = true)]
        mu: String,
    },
    /// Largest real root t′_μ (real μ).
    Real {
        #[arg(allow_hyphen_values = true)]
        mu: String,
    },
    /// Regime of the real roots (real μ).
    Classify {
        #[arg(allow_hyphen_values = true)]
        mu: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// `m` for (0,0,0,m) or `λ1,λ2,λ3,s`.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    /// Values `x1,x2,x3` on the base vertex (0/1, 1/1, inf) by color.
    #[arg(long, allow_hyphen_values = true)]
    pub base: String,
}

#[derive(Subcommand, Debug)]
pub enum MapCmd {
    /// Value of one region.
    Eval {
        #[command(flatten)]
        map: MapArgs,
        /// `p/q` or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
    },
    /// Greedy descent to a sink or a region below 2.
    Reduce {
        #[command(flatten)]
        map: MapArgs,
        /// Start vertex `p/q,r/s,u/v`; defaults to the base vertex.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
    },
    /// DOT graph of the tree ball with values and arrows.
    Dot {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Complex sink constant for μ = (0,0,0,m).
    SinkComplex {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Real sinks on a grid, bound max(|t′_μ|, 2).
    SinkReal {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, default_value_t = 10.0)]
        extent: f64,
        #[arg(long, default_value_t = 401)]
        steps: usize,
    },
    /// Positive sinks, bound T_μ.
    SinkPositive {
        /// `λ1,λ2,λ3,s`.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Hat-map sinks of the (8,8,8,−28) variety, bound 9.
    Hat,
    /// Genus-two corner inequalities.
    Genus2 {
        /// Comma-separated values of a; defaults to 20 points in (2, 5].
        #[arg(long)]
        a_grid: Option<String>,
        /// Comma-separated values of d; defaults to 20 points in (2, 5].
        #[arg(long)]
        d_grid: Option<String>,
        #[arg(long, value_enum, default_value_t = Policy::Both)]
        policy: Policy,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    Above,
    Below,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum TysCmd {
    /// Tys_k of the one-holed torus.
    Torus {
        #[arg(allow_hyphen_values = true)]
        k: String,
    },
    /// T_𝔅 of the four-holed sphere with non-negative boundary traces.
    Sphere {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    /// Tys(N₃), or the one-sided bound for a given character.
    N3 {
        /// Character `a,b,c,d` with a² + b² + c² − abc·d/2 = 4.
        #[arg(long, allow_hyphen_values = true)]
        character: Option<String>,
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Non-Fuchsian torus with real k > 2.
    Nonfuchsian {
        #[arg(allow_hyphen_values = true)]
        k: f64,
        /// Base triple `x,y,z` on the (0,0,0,k+2) variety.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    CrossCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 34)]
        max_denominator: i64,
    },
}
