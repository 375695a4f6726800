//! Command-line front end: `check`, `kernel`, `homology`, `decompose`, `koszul`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on a usage
//! or input error.

mod commands;
mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::homology::{VModuleSpec, DEFAULT_TRUNCATION};
use crate::tensor::RankMode;

pub use commands::{cmd_check, cmd_decompose, cmd_homology, cmd_kernel, cmd_koszul, Outcome};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// YBE, σ identities, bracket recursions, φ formula and decomposition
    Check,
    /// Kernel dimensions, tilde complements, Hilbert series and generators
    Kernel,
    /// Homology of a finite (--module) or free (--free) coefficient module
    Homology,
    /// Eigenspace decomposition of V^{⊗n} at a single degree (--n)
    Decompose,
    /// Koszul comparison squares (and δ-exactness for the free module)
    Koszul,
}

fn parse_rank_mode(s: &str) -> Result<RankMode, String> {
    s.parse::<RankMode>().map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ybhom", version, about = "Exact Yang-Baxter operator and homology verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Alphabet size m = dim V
    #[arg(long, global = true, default_value_t = 2)]
    pub m: usize,
    /// Largest tensor degree (default 4; the truncation for --free)
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Degree for `decompose` (default: --n-max)
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Finite module JSON file
    #[arg(long, global = true)]
    pub module: Option<PathBuf>,
    /// Use the polynomial module K[v_1..v_m]
    #[arg(long, global = true)]
    pub free: bool,
    /// Total-degree bound for --free
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Pretty)]
    pub output: OutputFormat,
    /// exact | eval | both
    #[arg(long = "rank-mode", global = true, default_value = "exact", value_parser = parse_rank_mode)]
    pub rank_mode: RankMode,
    /// Seed for randomized suites
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

/// Resolved configuration for one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub m: usize,
    pub n_max: usize,
    pub n: Option<usize>,
    pub module_path: Option<PathBuf>,
    pub free: bool,
    pub output: OutputFormat,
    pub rank_mode: RankMode,
    pub truncation: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        if cli.m == 0 {
            return Err("--m must be at least 1".into());
        }
        if cli.free && cli.module.is_some() {
            return Err("--free and --module are mutually exclusive".into());
        }
        let needs_module = matches!(cli.command, Command::Homology | Command::Koszul);
        if needs_module && !cli.free && cli.module.is_none() {
            return Err("this command needs --module <path> or --free".into());
        }
        let default_n = if cli.free { cli.truncation } else { 4 };
        Ok(RunConfig {
            command: cli.command,
            m: cli.m,
            n_max: cli.n_max.unwrap_or(default_n),
            n: cli.n,
            module_path: cli.module,
            free: cli.free,
            output: cli.output,
            rank_mode: cli.rank_mode,
            truncation: cli.truncation,
            seed: cli.seed,
        })
    }

    /// The coefficient module named by `--module` or `--free`.
    pub fn load_module(&self) -> Result<VModuleSpec, String> {
        if self.free {
            return VModuleSpec::free(self.m, self.truncation).map_err(|e| e.to_string());
        }
        let path = self.module_path.as_ref().ok_or("no module given")?;
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        VModuleSpec::parse_json(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn execute(config: &RunConfig) -> Result<Outcome, String> {
    match config.command {
        Command::Check => cmd_check(config),
        Command::Kernel => cmd_kernel(config),
        Command::Homology => cmd_homology(config),
        Command::Decompose => cmd_decompose(config),
        Command::Koszul => cmd_koszul(config),
    }
}

/// Parses arguments, runs the command and renders the report.
pub fn run<I, T>(args: I) -> CliResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliResult { code, stdout: String::new(), stderr: text }
            } else {
                CliResult { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let config = match RunConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => return CliResult { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    match execute(&config) {
        Err(msg) => CliResult { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Ok(outcome) => {
            let stdout = match config.output {
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&outcome.report).expect("serializable");
                    s.push('\n');
                    s
                }
                OutputFormat::Csv => outcome.csv.clone(),
                OutputFormat::Pretty => outcome.table.clone(),
            };
            match outcome.failures.first() {
                None => CliResult { code: EXIT_PASS, stdout, stderr: String::new() },
                Some(first) => CliResult {
                    code: EXIT_FAIL,
                    stdout,
                    stderr: format!("FAILED: {first} ({} failing checks)\n", outcome.failures.len()),
                },
            }
        }
    }
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let res = run(args);
    print!("{}", res.stdout);
    eprint!("{}", res.stderr);
    res.code
}
