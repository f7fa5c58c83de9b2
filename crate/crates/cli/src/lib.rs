//! Command-line driver: compute localization constants, certify theorems,
//! search for solutions, reproduce the parametric two-solution scenario,
//! and validate the abstract theorems on finite-dimensional fixtures.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod outputs;
pub mod spec_file;

use commands::{ExampleParams, EXIT_SPEC_ERROR};
use outputs::OutputSink;

#[derive(Debug, Parser)]
#[command(name = "conecert", version, about = "Certificates and fixed-point solvers for Dirichlet (p,q)-Laplacian systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute A_p, A_q, B_1p, B_2q and the first eigenvalues.
    Constants {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Omit timestamps for byte-identical reruns.
        #[arg(long)]
        canonical: bool,
    },
    /// Evaluate a theorem's certificate with numeric margins.
    Certify {
        #[arg(long)]
        spec: PathBuf,
        /// existence | existence-or | three | ladder | nonexistence | all
        #[arg(long, default_value = "existence")]
        theorem: String,
        /// Override the spec file's box-sampling resolution.
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        canonical: bool,
    },
    /// Fixed-point multiplicity search; writes records and CSV fields.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        canonical: bool,
    },
    /// Parametric scenario: find the scaling threshold, certify, solve.
    Example {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        d: f64,
        #[arg(long, default_value_t = 257)]
        nodes: usize,
        /// Fixed second-component seminorm radius.
        #[arg(long, default_value_t = 0.1)]
        r2: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        canonical: bool,
    },
    /// Check abstract conditions / validate a theorem on a fixture file.
    Lab {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        canonical: bool,
    },
}

/// Run one subcommand; returns the process exit code
/// (0 pass, 1 certified-fail, 2 spec error, 3 solver error, 4 search failure).
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Constants { spec, out, canonical } => {
            with_sink("constants", Some(&spec), &out, 0, canonical, |sink| {
                commands::cmd_constants(&spec, sink)
            })
        }
        Command::Certify { spec, theorem, resolution, out, canonical } => {
            with_sink("certify", Some(&spec), &out, 0, canonical, |sink| {
                commands::cmd_certify(&spec, &theorem, resolution, sink)
            })
        }
        Command::Solve { spec, out, seed, canonical } => {
            with_sink("solve", Some(&spec), &out, seed, canonical, |sink| {
                commands::cmd_solve(&spec, seed, sink)
            })
        }
        Command::Example { a, b, c, d, nodes, r2, out, seed, canonical } => {
            let params = ExampleParams { a, b, c, d, nodes, r2, ..ExampleParams::default() };
            with_sink("example", None, &out, seed, canonical, |sink| {
                commands::cmd_example(&params, seed, sink)
            })
        }
        Command::Lab { spec, resolution, out, canonical } => {
            with_sink("lab", Some(&spec), &out, 0, canonical, |sink| {
                commands::cmd_lab(&spec, resolution, sink)
            })
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_SPEC_ERROR
        }
    }
}

fn with_sink(
    subcommand: &str,
    spec: Option<&PathBuf>,
    out: &PathBuf,
    seed: u64,
    canonical: bool,
    body: impl FnOnce(&mut OutputSink) -> anyhow::Result<i32>,
) -> anyhow::Result<i32> {
    let mut sink =
        OutputSink::new(subcommand, spec.map(|p| p.as_path()), out, seed, canonical)?;
    let code = body(&mut sink)?;
    sink.finish()?;
    Ok(code)
}
