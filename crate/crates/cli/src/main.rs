mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "liesplit",
    version,
    about = "Coalgebra decompositions of tensor algebras and Lie powers over finite fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Field characteristic.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Extension degree of the ground field (default 1).
    #[arg(long, global = true)]
    pub e: Option<u32>,
    /// Seed for randomized module decompositions.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Validate parameters and bounds without computing.
    #[arg(long, global = true)]
    pub dry_run: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Dims,
    Explicit,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Dimension of the degree-n Lie power on m generators.
    Witt {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
    /// Lyndon basis of L_n(V) as tensor records.
    LieBasis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// The symmetric group module gamma_n of a functor.
    Gamma {
        /// Functor expression, or one of T, L, Lres for degree n.
        #[arg(long)]
        functor: String,
        #[arg(long)]
        n: usize,
        /// Also split the module into indecomposables.
        #[arg(long)]
        decompose: bool,
    },
    /// Projectivity verdict and certificate for a module.
    Projective {
        /// Module JSON as printed by `gamma`.
        #[arg(long)]
        module: Option<PathBuf>,
        #[arg(long, requires = "n")]
        functor: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Block decomposition of the tensor algebra by prime-to-p degree parts.
    Block {
        #[arg(long)]
        cap: usize,
    },
    /// Splitness of the sub Hopf algebra generated by Lie powers of the given degrees.
    Split {
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<usize>,
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Lie-power decomposition over basic products of generators.
    Hilton {
        #[arg(long = "M", value_delimiter = ',')]
        mset: Vec<usize>,
        /// p-power bounds aligned with --M; `-` for unbounded.
        #[arg(long = "f", value_delimiter = ',')]
        bounds: Vec<String>,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 2)]
        vdim: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Dims)]
        mode: ModeArg,
    },
    /// Splitness report for the algebra generated by L_{m p^r}.
    #[command(name = "report-1-1")]
    #[serde(rename = "report-1-1")]
    Report11 {
        #[arg(long = "M", value_delimiter = ',')]
        mset: Vec<usize>,
        #[arg(long = "f", value_delimiter = ',')]
        bounds: Vec<String>,
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("LIESPLIT_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    if let Some(jobs) = cli.common.jobs {
        if jobs == 0 {
            return run::emit_error(&cli, run::Failure::Config("--jobs must be positive".into()));
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            log::warn!("thread pool already initialized: {err}");
        }
    }
    match run::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => run::emit_error(&cli, failure),
    }
}
