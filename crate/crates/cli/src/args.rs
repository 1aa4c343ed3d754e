use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use critexp::Rational;

/// Binary words with a prescribed critical exponent.
#[derive(Debug, Parser)]
#[command(name = "critexp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a word avoiding alpha-powers with powers arbitrarily close to alpha.
    Generate(GenerateArgs),
    /// Report runs, maximum exponent and an optional freeness verdict.
    Analyze(AnalyzeArgs),
    /// Tabulate obtainable exponents r - t/2^s below alpha.
    Betas(BetasArgs),
    /// Run every check and the full construction pipeline.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Packed,
    Report,
}

/// `p/q`, an integer or a finite decimal, strictly above 2.
pub fn parse_alpha(s: &str) -> Result<Rational, String> {
    let alpha: Rational = s.parse().map_err(|e| format!("{e}"))?;
    if alpha <= Rational::from_integer(2) {
        return Err("alpha must exceed 2".into());
    }
    Ok(alpha)
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Rational,
    /// Number of nested levels (default 3).
    #[arg(long, conflicts_with = "target_len")]
    pub levels: Option<usize>,
    /// Emit exactly this many letters of the limit word.
    #[arg(long)]
    pub target_len: Option<u64>,
    /// First s tried by the schedule search.
    #[arg(long, default_value_t = 3)]
    pub s_start: u32,
    /// Read the schedule from a table instead of searching.
    #[arg(long, conflicts_with_all = ["levels", "target_len"])]
    pub schedule: Option<PathBuf>,
    /// Where to write the word.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Structured JSON report path.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Largest word, in letters.
    #[arg(long, default_value_t = critexp::construction::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Word file.
    pub input: PathBuf,
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Option<Rational>,
    /// Input layout: text or packed.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print every run, one per line.
    #[arg(long)]
    pub list_runs: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BetasArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Rational,
    #[arg(long, default_value_t = 3)]
    pub s_min: u32,
    #[arg(long, default_value_t = 14)]
    pub s_max: u32,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_alpha)]
    pub alpha: Rational,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest s for the Thue-Morse period check.
    #[arg(long, default_value_t = 10)]
    pub s_max: u32,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = critexp::construction::DEFAULT_BUDGET)]
    pub budget: u64,
}
