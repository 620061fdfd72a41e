//! Command-line front end for `fermatseq`.

mod commands;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermatseq::field::DEFAULT_DEGREE_CAP;
use fermatseq::sequences::SequenceKind;

pub use commands::run;
pub use report::{RunReport, SweepRow};

/// Largest prime accepted by `lc`, `verify` and `sweep` unless overridden.
pub const DEFAULT_MAX_P: u64 = 128;

#[derive(Debug, Parser)]
#[command(name = "fermatseq", version, about = "Binary sequences from Fermat quotients")]
pub struct Cli {
    /// Omit wall-clock timings so output is byte-identical across runs.
    #[arg(long, global = true)]
    pub no_timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write one period of a sequence.
    Gen(GenArgs),
    /// Compute linear complexity by the selected methods.
    Lc(LcArgs),
    /// Build the defining pair and trace representation and check them.
    Verify(VerifyArgs),
    /// Run `verify` over every odd prime up to a bound and print CSV.
    Sweep(SweepArgs),
    /// Show (computing and caching if needed) the field parameters for p.
    Params(ParamsArgs),
    /// Remove every cached field-parameter file.
    ClearCache,
}

#[derive(Debug, Clone, Args)]
pub struct KindArgs {
    /// Odd prime.
    #[arg(long)]
    pub p: u64,

    /// threshold, legendre-fermat, characteristic, balanced-threshold or
    /// balanced-legendre.
    #[arg(long, default_value = "threshold")]
    pub kind: String,

    /// Coset index for `--kind characteristic`.
    #[arg(long)]
    pub l: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct Caps {
    /// Largest prime that will be analysed.
    #[arg(long, default_value_t = DEFAULT_MAX_P)]
    pub max_p: u64,

    /// Largest extension degree m for GF(2^m).
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub kind: KindArgs,

    /// Output file; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Bm,
    Gcd,
    Blahut,
}

#[derive(Debug, Args)]
pub struct LcArgs {
    #[command(flatten)]
    pub kind: KindArgs,

    #[arg(long, value_delimiter = ',', default_value = "bm,gcd,blahut")]
    pub methods: Vec<Method>,

    #[command(flatten)]
    pub caps: Caps,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub kind: KindArgs,

    /// Write the DFT spectrum dump here.
    #[arg(long)]
    pub spectrum_out: Option<PathBuf>,

    /// Write the trace-representation report here.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,

    #[command(flatten)]
    pub caps: Caps,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub p_max: u64,

    /// Comma-separated kind names (`characteristic-<l>` for a coset).
    #[arg(long, value_delimiter = ',', default_value = "threshold,legendre-fermat")]
    pub kinds: Vec<String>,

    /// CSV output file; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub caps: Caps,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long)]
    pub p: u64,

    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    AllMatch,
    Mismatch,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Core(#[from] fermatseq::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for usage errors, 3 for capacity errors, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(fermatseq::Error::Parameter(_)) => 2,
            CliError::Unsupported(_) | CliError::Core(fermatseq::Error::Capacity { .. }) => 3,
            _ => 1,
        }
    }
}

impl KindArgs {
    pub fn resolve(&self) -> Result<SequenceKind, CliError> {
        resolve_kind(&self.kind, self.l)
    }
}

fn resolve_kind(name: &str, l: Option<u64>) -> Result<SequenceKind, CliError> {
    match (name, l) {
        ("characteristic", Some(l)) => Ok(SequenceKind::Characteristic(l)),
        ("characteristic", None) => Err(CliError::Usage(
            "--kind characteristic requires --l <index>".into(),
        )),
        (_, Some(_)) => Err(CliError::Usage(format!(
            "--l only applies to --kind characteristic, not {name}"
        ))),
        (_, None) => name
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown sequence kind {name:?}"))),
    }
}
