//! `mdsum` command-line front end.
//!
//! Every global option can also be set through the environment
//! (`MDSUM_ORDER`, `MDSUM_MZV_ERROR`, `MDSUM_FORMAT`, `MDSUM_THREADS`).
//! Flags win over the environment, which wins over built-in defaults.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdsum::linrel::Space;
use mdsum::Composition;

#[derive(Debug, Parser)]
#[command(name = "mdsum", version, about = "Exact computations with multiple divisor sums")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Number of q-coefficients computed and checked.
    #[arg(long, global = true, env = "MDSUM_ORDER", default_value_t = 120)]
    pub order: usize,
    /// Target absolute error for multiple zeta values.
    #[arg(long = "mzv-error", global = true, env = "MDSUM_MZV_ERROR", default_value_t = 1e-10)]
    pub mzv_error: f64,
    #[arg(long, global = true, env = "MDSUM_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "MDSUM_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Md,
    Mda,
    Both,
}

impl SpaceArg {
    fn spaces(self) -> Vec<Space> {
        match self {
            SpaceArg::Md => vec![Space::Md],
            SpaceArg::Mda => vec![Space::Mda],
            SpaceArg::Both => vec![Space::Md, Space::Mda],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paper,
}

fn composition(s: &str) -> Result<Composition, String> {
    let c: Composition = s.parse().map_err(|e: mdsum::Error| e.to_string())?;
    if c.is_empty() {
        return Err("expected at least one part".into());
    }
    Ok(c)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// q-expansion of a bracket, e.g. `series 4,2`.
    Series {
        #[arg(value_parser = composition)]
        parts: Composition,
    },
    /// Quasi-shuffle product of two brackets.
    Product {
        #[arg(value_parser = composition)]
        left: Composition,
        #[arg(value_parser = composition)]
        right: Composition,
    },
    /// The derivation q d/dq of a bracket, written in brackets.
    Derive {
        #[arg(value_parser = composition)]
        parts: Composition,
    },
    /// A bracket as a polynomial in [1] with admissible coefficients.
    Decompose {
        #[arg(value_parser = composition)]
        parts: Composition,
    },
    /// Dimensions of the length filtration.
    Dims {
        #[arg(long, value_enum, default_value_t = SpaceArg::Mda)]
        space: SpaceArg,
        #[arg(long = "max-weight")]
        max_weight: u32,
        /// Defaults to the maximal weight.
        #[arg(long = "max-length")]
        max_length: Option<u32>,
        /// Also bound the dimensions from above with proven relations.
        #[arg(long)]
        certify: bool,
        /// Write the table to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cap on generators times coefficients in any rank computation.
        #[arg(long = "max-cells", default_value_t = 4_000_000)]
        max_cells: u64,
    },
    /// Basis of relations among the generators of a filtration piece.
    Relations {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        length: u32,
        #[arg(long, value_enum, default_value_t = SpaceArg::Md)]
        space: SpaceArg,
        #[arg(long = "max-cells", default_value_t = 4_000_000)]
        max_cells: u64,
    },
    /// Run a verification suite; exits 3 naming the first failure.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Multiple zeta value with a rigorous error bound.
    Mzv {
        #[arg(value_parser = composition)]
        parts: Composition,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Verification(String),
    Resource(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Verification(_) => 3,
            Failure::Resource(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Resource(m) => write!(f, "resource cap exceeded: {m}"),
        }
    }
}

impl From<mdsum::Error> for Failure {
    fn from(e: mdsum::Error) -> Self {
        use mdsum::Error::*;
        match e {
            InvalidComposition(_) | NotAdmissible(_) | LambdaIndex { .. } | InvalidWeight(_)
            | WeightTooLarge { .. } | Unsupported(_) | Parse(_) => Failure::Usage(e.to_string()),
            OrderExceeded { .. } | Verification(_) | LinearSystem(_) => Failure::Verification(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MDSUM_LOG", "warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.config.threads)
        .build_global()
    {
        eprintln!("cannot start thread pool: {e}");
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("mdsum: {f}");
            ExitCode::from(f.code())
        }
    }
}
