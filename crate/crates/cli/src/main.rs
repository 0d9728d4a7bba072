use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use quasidet_cli::{run_job, JobSpec};

/// Quasideterminant calculus and noncommutative spectral decomposition.
///
/// Reads a JSON job from stdin (or --in FILE) and writes a JSON report
/// to stdout. Flags override the corresponding job fields.
#[derive(Parser)]
#[command(name = "quasidet", version, about)]
struct Args {
    /// Job file; stdin is used when omitted
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,

    /// Ring backend: rational | complex | quaternion-exact |
    /// quaternion-float | fock
    #[arg(long)]
    ring: Option<String>,

    /// Command: qdet | inverse | charpoly | ch-verify | spectral |
    /// funcmat | identities
    #[arg(long)]
    command: Option<String>,

    /// Absolute tolerance for approximate backends
    #[arg(long)]
    tol: Option<f64>,

    /// Probe window size for the oscillator backend
    #[arg(long)]
    probe: Option<u32>,

    /// Add human-readable renderings to the report
    #[arg(long)]
    pretty: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();

    let raw = match &args.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display())),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map(|_| buf)
                .map_err(|e| format!("cannot read stdin: {e}"))
        }
    };
    let raw = match raw {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(1);
        }
    };

    let mut job: JobSpec = match serde_json::from_str(&raw) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("invalid job JSON: {e}");
            return ExitCode::from(1);
        }
    };
    if args.ring.is_some() {
        job.ring = args.ring.clone();
    }
    if args.command.is_some() {
        job.command = args.command.clone();
    }
    if args.tol.is_some() {
        job.tolerance = args.tol;
    }
    if args.probe.is_some() {
        job.probe_levels = args.probe;
    }

    let outcome = run_job(&job, args.pretty);
    match serde_json::to_string_pretty(&outcome.report) {
        Ok(s) => println!("{s}"),
        Err(e) => {
            eprintln!("cannot serialize report: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
