//! `qpr`: certify sets of qubit bases for simultaneous non-negativity,
//! generate the closed-form families, scan feasibility thresholds, simulate
//! classical subtheories, and run the verification suite.
//!
//! Angles are always in radians. Exit codes: 0 success (feasible, for
//! `certify`), 1 infeasible / failed verification, 2 invalid input,
//! 3 numerical failure. The environment variable `QPR_MODE` (exact|float)
//! sets the default arithmetic mode; `--mode` overrides it.

mod commands;
mod docs;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qpr",
    version,
    about = "Quasiprobability non-negativity workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the bases in a JSON document can be simultaneously
    /// non-negative; writes a certificate either way.
    Certify {
        /// Input BasesDocument (JSON).
        input: PathBuf,
        /// Arithmetic mode: exact or float (default from QPR_MODE, else float).
        #[arg(long)]
        mode: Option<String>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the bases (and optionally the frame) of a family member.
    Family {
        /// single | pair | d3 | c2 | cuboid | stabilizer | icosahedron.
        kind: String,
        /// Polar angle in radians.
        #[arg(long)]
        theta: Option<f64>,
        /// Azimuthal angle in radians.
        #[arg(long)]
        phi: Option<f64>,
        /// Free distribution parameter for the d3/c2 general solutions.
        #[arg(long)]
        q0: Option<f64>,
        /// Also emit the distribution and frame operators.
        #[arg(long)]
        emit_frame: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bisect a family's feasibility boundary along one parameter.
    Scan {
        /// d3 | c2 | cuboid.
        kind: String,
        /// Parameter to scan: theta or phi.
        #[arg(long)]
        param: String,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        /// Bisection tolerance on the parameter.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Fixed theta (when scanning phi).
        #[arg(long)]
        theta: Option<f64>,
        /// Fixed phi (when scanning theta).
        #[arg(long)]
        phi: Option<f64>,
    },
    /// Run a gate circuit on a subtheory model, reporting ontic and quantum
    /// outcome statistics.
    Simulate {
        /// stabilizer | d3 | c2 | cuboid.
        #[arg(long)]
        family: String,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        phi: Option<f64>,
        /// Free d3 distribution parameter.
        #[arg(long)]
        q0: Option<f64>,
        /// Initial state label, e.g. z+ or b2-.
        #[arg(long)]
        initial: String,
        /// Whitespace-separated gate names, e.g. "H P H".
        #[arg(long)]
        circuit: String,
        /// Measurement basis label, e.g. x or b2.
        #[arg(long)]
        measure: String,
    },
    /// Run the verification suite and write a JSON report.
    Verify {
        /// all | qubit | qudit.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Certify { input, mode, out } => commands::certify::run(&input, mode, out),
        Command::Family {
            kind,
            theta,
            phi,
            q0,
            emit_frame,
            out,
        } => commands::family::run(&kind, theta, phi, q0, emit_frame, out),
        Command::Scan {
            kind,
            param,
            lo,
            hi,
            tol,
            theta,
            phi,
        } => commands::scan::run(&kind, &param, lo, hi, tol, theta, phi),
        Command::Simulate {
            family,
            theta,
            phi,
            q0,
            initial,
            circuit,
            measure,
        } => commands::simulate::run(&family, theta, phi, q0, &initial, &circuit, &measure),
        Command::Verify {
            suite,
            trials,
            seed,
            out,
        } => commands::verify::run(&suite, trials, seed, out),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::error_code(&e))
        }
    }
}
