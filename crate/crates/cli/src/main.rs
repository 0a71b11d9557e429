//! `graphkrylov`: kernel approximations, predictors and convergence studies
//! on graphs from the command line.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
//! failures.

mod commands;
mod config;
mod error;
mod output;

use clap::{Parser, Subcommand};

use crate::error::EXIT_CONFIG;

#[derive(Debug, Parser)]
#[command(
    name = "graphkrylov",
    version,
    about = "Block Krylov approximation of graph kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Approximate the kernel columns at the sampling nodes.
    Kernel(commands::KernelCmd),
    /// Train a kernel regression predictor and classify by sign.
    Predict(commands::PredictCmd),
    /// Sweep the number of iterations for several methods.
    Convergence(commands::ConvergenceCmd),
    /// Eigenvalues of the approximate collocation matrices.
    Spectrum(commands::SpectrumCmd),
    /// Size, connectivity and spectral bound of a graph.
    GraphInfo(commands::GraphInfoCmd),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match &cli.command {
        Command::Kernel(c) => commands::kernel(c),
        Command::Predict(c) => commands::predict(c),
        Command::Convergence(c) => commands::convergence(c),
        Command::Spectrum(c) => commands::spectrum(c),
        Command::GraphInfo(c) => commands::graph_info(c),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
