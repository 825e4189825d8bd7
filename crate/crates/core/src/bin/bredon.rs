//! Command-line front end: validate documents, compute equivariant
//! cohomology, run the two-pipeline comparison, or the fibration spectral
//! sequence. Exit codes: 0 success, 1 computational mismatch, 2 bad input.

use bredon::report::{cmd_cohomology, cmd_eilenberg, cmd_serre, cmd_validate, Report};
use bredon::schema::RingTag;
use clap::{Parser, Subcommand};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "bredon", about = "Equivariant simplicial cohomology with local coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the document: group, space, action, coefficients, fibration
    Validate {
        path: String,
        #[arg(long)]
        ring: Option<String>,
        /// seed for the random-coefficient smoke test
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<String>,
    },
    /// Equivariant cohomology table
    Cohomology {
        path: String,
        /// inclusive degree range, e.g. 0..2
        #[arg(long)]
        degrees: Option<String>,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        json: Option<String>,
    },
    /// Compare the equivariant and invariant-cochain pipelines
    Eilenberg {
        path: String,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        json: Option<String>,
    },
    /// Fibration spectral sequence over a field
    Serre {
        path: String,
        #[arg(long)]
        ring: Option<String>,
        /// last page to include in the report
        #[arg(long, default_value_t = 2)]
        rmax: usize,
        #[arg(long)]
        json: Option<String>,
    },
}

fn parse_ring(s: &Option<String>) -> Result<Option<RingTag>, String> {
    match s {
        None => Ok(None),
        Some(t) => RingTag::parse(t).map(Some).map_err(|e| e.to_string()),
    }
}

fn parse_degrees(s: &Option<String>) -> Result<Option<(usize, usize)>, String> {
    match s {
        None => Ok(None),
        Some(t) => {
            let (a, b) = t
                .split_once("..")
                .ok_or_else(|| format!("degree range {t:?} is not of the form a..b"))?;
            let a = a.trim().parse().map_err(|_| format!("bad degree {a:?}"))?;
            let b = b.trim().parse().map_err(|_| format!("bad degree {b:?}"))?;
            Ok(Some((a, b)))
        }
    }
}

fn emit(report: &Report, json: &Option<String>, started: Instant) -> ExitCode {
    if let Some(path) = json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: could not write {path}: {e}");
            return ExitCode::from(2);
        }
    }
    println!("{}", report.render_human());
    println!("elapsed: {:.1?}", started.elapsed());
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    let started = Instant::now();
    let (path, json) = match &cli.command {
        Command::Validate { path, json, .. }
        | Command::Cohomology { path, json, .. }
        | Command::Eilenberg { path, json, .. }
        | Command::Serre { path, json, .. } => (path.clone(), json.clone()),
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("could not read {path}: {e}"))?;
    let report = match &cli.command {
        Command::Validate { ring, seed, .. } => {
            cmd_validate(&text, parse_ring(ring)?, *seed).map_err(|e| e.to_string())?
        }
        Command::Cohomology { degrees, ring, .. } => {
            cmd_cohomology(&text, parse_degrees(degrees)?, parse_ring(ring)?)
                .map_err(|e| e.to_string())?
        }
        Command::Eilenberg { ring, .. } => {
            cmd_eilenberg(&text, parse_ring(ring)?).map_err(|e| e.to_string())?
        }
        Command::Serre { ring, rmax, .. } => {
            cmd_serre(&text, parse_ring(ring)?, *rmax).map_err(|e| e.to_string())?
        }
    };
    Ok(emit(&report, &json, started))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
