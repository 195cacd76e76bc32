//! `hardreg`: build hard regularity instances, verify them, and issue or
//! check refutation certificates.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or configuration
//! error, 3 resource limit (enumeration cap or sampler budget).

mod commands;
mod config;
mod manifest;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hardreg::regularity::{CheckOptions, DEFAULT_CAP};
use hardreg::Error;

#[derive(Parser)]
#[command(name = "hardreg", version, about = "Hard instances for graph and hypergraph regularity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Args, Clone, Debug)]
struct CheckArgs {
    /// Exact subset enumeration or seeded sampling.
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    /// Largest number of subsets exact mode may enumerate.
    #[arg(long, env = "HARDREG_CAP", default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Restarts per sampled search.
    #[arg(long, default_value_t = 32)]
    restarts: u32,
}

impl CheckArgs {
    fn options(&self, seed: u64) -> CheckOptions {
        match self.mode {
            ModeArg::Exact => CheckOptions::exact(self.cap),
            ModeArg::Sampled => CheckOptions { cap: self.cap, ..CheckOptions::sampled(seed, self.restarts) },
        }
    }
}

#[derive(Args, Clone, Copy, Debug)]
#[group(multiple = false)]
struct Strictness {
    /// Enforce the parameter regime of the proofs.
    #[arg(long)]
    strict: bool,
    /// Accept desk-scale parameters and report the audits as measured.
    #[arg(long)]
    relaxed: bool,
}

impl Strictness {
    /// `Some(true)` for strict, `Some(false)` for relaxed.
    fn choice(&self) -> Option<bool> {
        match (self.strict, self.relaxed) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the core graph sequence from a growth profile.
    BuildCore {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        strictness: Strictness,
    },
    /// Build the pasted k-graph instance from a parameter schedule.
    BuildHypergraph {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        schedule: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        strictness: Strictness,
    },
    /// Build the triangle-free counterexample.
    Counterexample {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        strictness: Strictness,
    },
    /// Run a verification suite on an artifact directory.
    Verify {
        #[arg(long)]
        dir: PathBuf,
        /// Suite name; `list` prints the suites for this directory.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Seed for sampled checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random subset pairs per class pair in the counterexample blowup.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Refute a partition pair of a core member and write the certificate.
    Certify {
        #[arg(long)]
        dir: PathBuf,
        /// Left partition file.
        #[arg(long)]
        p: PathBuf,
        /// Right partition file.
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 0)]
        member: usize,
        #[arg(long)]
        t: usize,
        /// `paper`, or a rational used as γ.
        #[arg(long, default_value = "1/4")]
        gamma: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-verify a certificate against a core directory.
    VerifyCert {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Rebuild a directory from its manifest and compare artifact hashes.
    Replay {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    Fail,
}

pub enum CliError {
    Core(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::BuildCore { profile, seed, out, strictness } => commands::build_core(&profile, seed, &out, strictness.choice()),
        Command::BuildHypergraph { k, s, schedule, seed, out, strictness } => {
            commands::build_hypergraph(k, s, &schedule, seed, &out, strictness.choice())
        }
        Command::Counterexample { params, seed, out, strictness } => {
            commands::counterexample(&params, seed, &out, strictness.choice())
        }
        Command::Verify { dir, suite, seed, samples, json, check } => {
            commands::verify(&dir, &suite, &check.options(seed), samples, seed, json)
        }
        Command::Certify { dir, p, q, delta, level, member, t, gamma, out } => {
            commands::certify(&dir, &p, &q, &delta, level, member, t, &gamma, &out)
        }
        Command::VerifyCert { dir, cert } => commands::verify_cert(&dir, &cert),
        Command::Replay { manifest, out } => commands::replay(&manifest, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CapExceeded { .. } | Error::Exhausted { .. } => 3,
                _ => 2,
            })
        }
    }
}
