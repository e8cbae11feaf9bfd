//! Command-line front end: scenario files in, JSON/CSV/text out.

pub mod commands;
pub mod emit;
pub mod scenario;

use clap::{Parser, Subcommand};
use commands::{parse_axis, CommandError};
use emit::Format;
use sigev_core::analysis::SweepAxis;
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFICATION_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sigev", version, about = "Equilibria of binary signaling games with a deception detector")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every equilibrium of a scenario.
    Solve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Solve along one axis: the prior, detector quality J, or aggressiveness G.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_parser = parse_axis)]
        axis: SweepAxis,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Check a strategy profile against the equilibrium conditions.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Grid search over sender strategies for equilibrium candidates.
    Search {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Report on the bundled honeypot scenario.
    CaseStudy,
    /// Sender utility against a noisy receiver, and receiver utility against any sender.
    Robustness {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        noise: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "json")]
        format: Format,
    },
}

/// Result of one invocation: exit code and captured streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl Outcome {
    fn ok(stdout: Vec<u8>) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: Vec::new(),
        }
    }

    fn failed(err: CommandError) -> Self {
        Self {
            code: err.exit_code(),
            stdout: Vec::new(),
            stderr: format!("error: {err}\n").into_bytes(),
        }
    }
}

pub fn execute(command: Command) -> Outcome {
    let result = match command {
        Command::Solve { scenario, format } => commands::solve_cmd(&scenario, format),
        Command::Sweep {
            scenario,
            axis,
            from,
            to,
            steps,
            format,
        } => commands::sweep_cmd(&scenario, axis, from, to, steps, format),
        Command::Verify {
            scenario,
            profile,
            epsilon,
        } => {
            return match commands::verify_cmd(&scenario, &profile, epsilon) {
                Ok((stdout, true)) => Outcome::ok(stdout),
                Ok((stdout, false)) => Outcome {
                    code: EXIT_VERIFICATION_FAILED,
                    stdout,
                    stderr: b"verification failed\n".to_vec(),
                },
                Err(e) => Outcome::failed(e),
            }
        }
        Command::Search {
            scenario,
            grid,
            epsilon,
            format,
        } => commands::search_cmd(&scenario, grid, epsilon, format),
        Command::CaseStudy => commands::case_study_cmd(),
        Command::Robustness {
            scenario,
            noise,
            trials,
            seed,
            format,
        } => commands::robustness_cmd(&scenario, noise, trials, seed, format),
    };
    result.map_or_else(Outcome::failed, Outcome::ok)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command),
        Err(err) => {
            let text = err.render().to_string().into_bytes();
            if err.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: Vec::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            }
        }
    }
}
