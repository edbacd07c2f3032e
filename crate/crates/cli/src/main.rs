use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use multimod::diagnostic::Diagnostic;
use multimod::runner::{diagnostics_report, Options, Verdict};
use multimod::{parser, run_source};

/// Exact multimodule computations over Z/n, driven by a declarative document.
#[derive(Parser)]
#[command(name = "multimod", version)]
struct Cli {
    /// Seed for sampled agreement checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest number of candidate maps enumerated exhaustively.
    #[arg(long = "enum-threshold", global = true, default_value_t = 4096)]
    enum_threshold: u64,
    /// Write the JSON report to this file instead of standard output.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Suppress the human-readable summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command in a document and report the results.
    Run { file: PathBuf },
    /// Print a document in canonical form.
    Fmt { file: PathBuf },
}

const USAGE_ERROR: u8 = 2;

fn read(path: &Path) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("multimod: cannot read {}: {e}", path.display());
        ExitCode::from(USAGE_ERROR)
    })
}

fn show(path: &Path, diags: &[Diagnostic], quiet: bool) {
    if quiet {
        return;
    }
    for d in diags {
        eprintln!("{}:{d}", path.display());
    }
}

fn emit(cli: &Cli, report: &serde_json::Value) -> Result<(), ExitCode> {
    let mut text = serde_json::to_string_pretty(report).expect("serializable report");
    text.push('\n');
    match &cli.json {
        Some(path) => fs::write(path, text).map_err(|e| {
            eprintln!("multimod: cannot write {}: {e}", path.display());
            ExitCode::from(USAGE_ERROR)
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|_| ExitCode::from(USAGE_ERROR)),
    }
}

fn run(cli: &Cli, file: &Path) -> Result<ExitCode, ExitCode> {
    let src = read(file)?;
    let opts = Options {
        seed: cli.seed,
        enum_threshold: cli.enum_threshold as u128,
    };
    match run_source(&src, &opts) {
        Err(diags) => {
            show(file, &diags, cli.quiet);
            emit(cli, &diagnostics_report(&diags))?;
            Ok(ExitCode::from(USAGE_ERROR))
        }
        Ok(outcome) => {
            let warnings: Vec<Diagnostic> = parser::parse(&src).map(|p| p.warnings).unwrap_or_default();
            show(file, &warnings, cli.quiet);
            if !cli.quiet {
                for r in &outcome.results {
                    let tag = match r.verdict {
                        Verdict::Pass => "PASS ",
                        Verdict::Fail => "FAIL ",
                        Verdict::Error => "ERROR",
                    };
                    eprintln!("{tag} {}:{} {}", file.display(), r.line, r.text);
                }
            }
            emit(cli, &outcome.report)?;
            Ok(ExitCode::from(if outcome.passed() { 0 } else { 1 }))
        }
    }
}

fn fmt(file: &Path, quiet: bool) -> Result<ExitCode, ExitCode> {
    let src = read(file)?;
    match parser::parse(&src) {
        Ok(p) => {
            show(file, &p.warnings, quiet);
            print!("{}", p.document);
            Ok(ExitCode::SUCCESS)
        }
        Err(diags) => {
            show(file, &diags, false);
            Ok(ExitCode::from(USAGE_ERROR))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Run { file } => run(&cli, file),
        Cmd::Fmt { file } => fmt(file, cli.quiet),
    };
    result.unwrap_or_else(|code| code)
}
