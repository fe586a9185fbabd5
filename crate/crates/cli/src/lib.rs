//! Command-line front end for `fracvar`.
//!
//! Exit codes: 0 success, 1 input error, 2 non-convergence, 3 failed
//! verdict.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod output;
pub mod problem;

pub use problem::ProblemFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_VERDICT: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: String) -> Self {
        CliError {
            code: EXIT_INPUT,
            message,
        }
    }

    /// Solver failures are non-convergence, everything else is bad input.
    pub fn from_core(e: fracvar::Error) -> Self {
        let code = match e {
            fracvar::Error::BracketFailure { .. } | fracvar::Error::ObjectiveNonFinite(_) => {
                EXIT_NONCONVERGENCE
            }
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::input(format!("{}: {e}", path.display()))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(
    name = "fracvar",
    version,
    about = "Fractional variational problems with Caputo derivatives"
)]
pub struct Cli {
    /// Output directory for CSV artifacts.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Grid size, overriding the problem file.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Fixed verdict tolerance instead of the adaptive one.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimise the functional (with the multiplier search if constrained).
    Solve { file: PathBuf },
    /// Euler-Lagrange residual and sufficiency verdict for the [candidate].
    Residual { file: PathBuf },
    /// Independent solves over a list of orders.
    Sweep {
        file: PathBuf,
        /// Comma separated orders in (0, 1]; 1 is replaced by 0.999.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        alphas: String,
    },
    /// Print E_alpha(x) to 15 significant digits.
    Ml {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Compare both sides of a fractional integration-by-parts formula.
    CheckIbp {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b: f64,
        #[arg(long)]
        alpha: f64,
        /// f as an expression in x.
        #[arg(long)]
        f: String,
        /// g as an expression in x.
        #[arg(long)]
        g: String,
        /// IP1, IP2, IP3 or IP4.
        #[arg(long)]
        variant: String,
    },
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match commands::dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
