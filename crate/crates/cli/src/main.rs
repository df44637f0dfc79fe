use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

mod pin;
mod run;
mod tree;

#[derive(Parser)]
#[command(name = "ce-workbench", version, about = "Trees, reductions and priority constructions at finite stages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and transform trees and their orders.
    #[command(subcommand)]
    Tree(tree::TreeCmd),
    /// Height-2 families, reductions and the witness machine.
    #[command(subcommand)]
    Pin(pin::PinCmd),
    /// Run the priority construction and write its trace.
    Run(run::RunArgs),
    /// Audit a trace; exits 1 when any check fails.
    Audit(run::AuditArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    pub fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, format!("{text}\n"))
                .with_context(|| format!("writing {}", path.display())),
            None => print_out(text),
        }
    }
}

/// Prints a line to stdout; a closed pipe is not an error.
pub fn print_out(text: &str) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

pub fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Raised by `audit` when a check fails; maps to exit code 1.
#[derive(Debug)]
pub struct AuditFailed;

impl std::fmt::Display for AuditFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("audit failed")
    }
}

impl std::error::Error for AuditFailed {}

/// Input that could not be parsed; maps to exit code 3.
#[derive(Debug)]
pub struct ParseFailure(pub String);

impl std::fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ParseFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<AuditFailed>().is_some() {
        return 1;
    }
    if err.downcast_ref::<ParseFailure>().is_some() {
        return 3;
    }
    match err.downcast_ref::<ce_core::Error>() {
        Some(
            ce_core::Error::Syntax { .. }
            | ce_core::Error::Unbound { .. }
            | ce_core::Error::Json(_)
            | ce_core::Error::Trace(_),
        ) => 3,
        _ if err.downcast_ref::<serde_json::Error>().is_some() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tree(cmd) => tree::run(cmd),
        Command::Pin(cmd) => pin::run(cmd),
        Command::Run(args) => run::run(args),
        Command::Audit(args) => run::audit(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if err.downcast_ref::<AuditFailed>().is_none() {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
