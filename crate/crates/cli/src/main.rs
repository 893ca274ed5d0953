//! `qfp`: reproducible fingerprinting experiments from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qfingerprint::BitString;
use serde::Serialize;

use crate::output::Format;

#[derive(Parser)]
#[command(name = "qfp", version, about = "Quantum fingerprinting simulation laboratory")]
struct Cli {
    /// Master seed; every random choice of a run derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare the analytic, circuit and sampled SWAP test on one state pair.
    SwapTest(SwapArgs),
    /// Evaluate the permutation test on k copies of two qubit states.
    PermTest(PermArgs),
    /// Run a seeded simultaneous-message experiment.
    SmpRun(SmpArgs),
    /// Audit random sign-vector sets or sampled pairs.
    Nearset(NearsetArgs),
    /// Print a code description and its distance certificate.
    Codes(CodesArgs),
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CodeChoice {
    Hadamard,
    RandomLinear,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CodeOpts {
    #[arg(long = "code", value_enum, default_value_t = CodeChoice::Hadamard)]
    pub kind: CodeChoice,
    /// Message length.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Rate factor of a random linear code (m = c·n).
    #[arg(long, default_value_t = 4)]
    pub c: usize,
    /// Generator seed of a random linear code; defaults to the master seed.
    #[arg(long)]
    pub code_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StateSource {
    /// Code fingerprints of the messages `--x` and `--y`.
    Fingerprint,
    /// Haar-random states of dimension `--dim`.
    Random,
    /// Normalized random sign vectors of dimension `--dim`.
    SignVector,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SwapArgs {
    #[command(flatten)]
    pub code: CodeOpts,
    #[arg(long, value_enum, default_value_t = StateSource::Fingerprint)]
    pub states: StateSource,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_parser = parse_bits)]
    pub x: Option<BitString>,
    #[arg(long, value_parser = parse_bits, conflicts_with = "x_equals_y")]
    pub y: Option<BitString>,
    /// Use the same input (or state) on both registers.
    #[arg(long)]
    pub x_equals_y: bool,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct PermArgs {
    /// Copies of each state.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Overlap |<φ|ψ>| of the two states, also used as δ for the bounds.
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PairChoice {
    Random,
    ForcedEqual,
    ForcedUnequal,
    Adversarial,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct SmpArgs {
    #[command(flatten)]
    pub code: CodeOpts,
    /// quantum, shared-key or mixture.
    #[arg(long)]
    pub protocol: String,
    /// Fingerprint copies for the quantum protocol.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Sampled positions for the shared-key protocol.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, value_enum, default_value_t = PairChoice::Random)]
    pub pairs: PairChoice,
    /// Input pair `x:y` for adversarial runs; repeatable.
    #[arg(long = "pair", value_parser = parse_pair)]
    pub pair: Vec<(BitString, BitString)>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct NearsetArgs {
    /// Sets of 2^n vectors are sampled and audited (set mode).
    #[arg(long, default_value_t = 8)]
    pub n: u32,
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    /// Number of independently seeded sets (set mode).
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// Vector dimension; set mode defaults to the existence bound.
    #[arg(long)]
    pub d: Option<usize>,
    /// Audit independently sampled pairs instead of a full set.
    #[arg(long)]
    pub pair_mode: bool,
    #[arg(long, default_value_t = 100_000)]
    pub pairs: u64,
}

#[derive(Args, Clone, Debug, Serialize)]
pub struct CodesArgs {
    #[command(flatten)]
    pub code: CodeOpts,
    /// Also certify by comparing every pair of codewords.
    #[arg(long)]
    pub exhaustive: bool,
}

fn parse_bits(s: &str) -> Result<BitString, String> {
    s.parse::<BitString>().map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> Result<(BitString, BitString), String> {
    let (x, y) = s.split_once(':').ok_or_else(|| format!("expected x:y, got {s:?}"))?;
    Ok((parse_bits(x)?, parse_bits(y)?))
}

fn exit_code(err: &qfingerprint::Error) -> u8 {
    use qfingerprint::Error::*;
    match err {
        Capability(_) => 3,
        Verification(_) => 1,
        InputShape(_) | Domain(_) | Config(_) | NotInjective(_) | Format(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match &cli.command {
        Command::SwapTest(a) => commands::swap_test(a, cli.seed),
        Command::PermTest(a) => commands::perm_test(a, cli.seed),
        Command::SmpRun(a) => commands::smp_run(a, cli.seed),
        Command::Nearset(a) => commands::nearset(a, cli.seed),
        Command::Codes(a) => commands::codes(a, cli.seed),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qfp: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = match report.render(cli.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("qfp: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("qfp: {msg}");
            ExitCode::from(1)
        }
    }
}
