//! Command-line driver: validate and run session files, and explain what
//! the verifiers enforce.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xsq_core::session::{
    emit_report, explain, parse_session, run, Config, ReportFormat,
};

#[derive(Parser)]
#[command(name = "xsq", version, about = "Finite crossed modules, non-abelian tensor products and crossed squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Limits {
    /// Live-coset bound for coset enumeration
    #[arg(long, default_value_t = xsq_core::limits::DEFAULT_MAX_COSETS)]
    max_cosets: usize,
    /// Largest group order materialised as a multiplication table
    #[arg(long, default_value_t = xsq_core::limits::DEFAULT_ORDER_BOUND)]
    order_bound: u64,
    /// Order cutoff for the non-abelian isomorphism search
    #[arg(long, default_value_t = xsq_core::limits::DEFAULT_ISO_ORDER_BOUND)]
    iso_order_bound: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a session file without running its tasks
    Check {
        session: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Run every task of a session file and print the report
    Run {
        session: PathBuf,
        #[command(flatten)]
        limits: Limits,
        /// Suppress per-task wall-clock timings for byte-stable reports
        #[arg(long)]
        no_timings: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the axiom list a verifier op enforces
    Explain { op: String },
}

fn config(limits: &Limits, no_timings: bool) -> Config {
    Config {
        max_cosets: limits.max_cosets,
        order_bound: limits.order_bound,
        iso_order_bound: limits.iso_order_bound,
        no_timings,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { session, limits } => {
            let text = match std::fs::read_to_string(&session) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", session.display());
                    return ExitCode::from(2);
                }
            };
            match parse_session(&text, &config(&limits, false)) {
                Ok(s) => {
                    println!(
                        "ok: {} declarations, {} tasks",
                        s.declarations.len(),
                        s.tasks.len()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Run {
            session,
            limits,
            no_timings,
            format,
        } => {
            let text = match std::fs::read_to_string(&session) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", session.display());
                    return ExitCode::from(2);
                }
            };
            let cfg = config(&limits, no_timings);
            let parsed = match parse_session(&text, &cfg) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let report = run(&parsed, &cfg);
            let bytes = emit_report(
                &report,
                match format {
                    Format::Json => ReportFormat::Json,
                    Format::Text => ReportFormat::Text,
                },
            );
            std::io::stdout().write_all(&bytes).ok();
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Explain { op } => match explain(&op) {
            Some(text) => {
                println!("{text}");
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("no verifier named `{op}`; try one of: verify-xmod, verify-xsq, verify-weak, verify-lie-action, verify-lie-xmod, verify-lie-pairing, verify-lie-xsq, is-groupoid, h-image");
                ExitCode::from(1)
            }
        },
    }
}
