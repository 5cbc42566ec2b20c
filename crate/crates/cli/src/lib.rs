//! Command-line front end: bracket definition files, axiom checks, the
//! deformation pipeline and the model checks.
//!
//! Exit codes: 0 success or trivial verdict, 1 mathematical failure,
//! 2 usage or parse error, 3 nontrivial verdict, 4 undetermined.

pub mod commands;
pub mod parse;
pub mod print;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use pva_core::par::Execution;

#[derive(Parser, Debug)]
#[command(
    name = "pva",
    version,
    about = "Poisson vertex algebra checks and deformation analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the six axioms on a bracket.
    Verify {
        /// euler, epdiff1, epdiff2, file:PATH or PATH
        #[arg(long)]
        bracket: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random sample polynomials for the sesquilinearity and Leibniz checks.
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Classify the deformations of a scalar bracket at a given order.
    Deform {
        #[arg(long)]
        bracket: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
        order: u32,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
        /// Skip the skewsymmetry, Jacobi and degree checks on the base.
        #[arg(long)]
        no_validate: bool,
        /// Run coefficient extraction on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Derive the EPDiff equations from the Lie–Poisson bracket.
    Epdiff {
        #[arg(long)]
        dim: usize,
    },
    /// Check the stream-function reduction to the Euler bracket.
    ReduceCheck {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        orientation: i8,
    },
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Verify { bracket, seed, samples } => commands::verify(&bracket, seed, samples, out, err),
        Command::Deform {
            bracket,
            order,
            out: path,
            quiet,
            no_validate,
            sequential,
        } => {
            let args = commands::DeformArgs {
                source: bracket,
                order,
                out: path,
                quiet,
                no_validate,
                exec: if sequential {
                    Execution::Sequential
                } else {
                    Execution::default()
                },
            };
            commands::deform(&args, out, err)
        }
        Command::Epdiff { dim } => commands::epdiff(dim, out, err),
        Command::ReduceCheck {
            seed,
            trials,
            orientation,
        } => commands::reduce_check(seed, trials, orientation, out, err),
    }
}
