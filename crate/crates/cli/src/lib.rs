//! A declarative language for multimodule computations and its command runner.
//!
//! A document declares a base ring, algebras, conjugations, multimodules,
//! morphisms, involutions and inner products, followed by commands. The
//! [`runner`] executes the commands and produces a JSON report.

pub mod ast;
pub mod diagnostic;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod resolve;
pub mod runner;

use diagnostic::Diagnostic;

/// Parses and resolves a document, then runs its commands.
///
/// On a parse or resolution failure the diagnostics are returned instead.
pub fn run_source(src: &str, opts: &runner::Options) -> Result<runner::Outcome, Vec<Diagnostic>> {
    let parsed = parser::parse(src)?;
    let env = resolve::resolve(&parsed.document).map_err(|mut errs| {
        errs.extend(parsed.warnings.iter().cloned());
        errs
    })?;
    Ok(runner::run(&env, &parsed.warnings, opts))
}
