//! Diagnostic reports produced by the axiom checks.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// The data needed to reproduce a failed law: the generators involved and both evaluated sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Generator names, for example `["a=e1", "x=g0", "b=e0"]`.
    pub generators: Vec<String>,
    /// Left-hand side of the failed identity.
    pub lhs: Vec<u64>,
    /// Right-hand side of the failed identity.
    pub rhs: Vec<u64>,
}

/// One failed law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Short name of the law, such as `associativity` or `commutation`.
    pub law: String,
    /// Human-readable description of where it failed.
    pub detail: String,
    /// Generators and values reproducing the failure.
    pub witness: Option<Witness>,
}

/// The outcome of an axiom check.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    /// Whether every law holds.
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// Records a failure without a witness.
    pub fn fail(&mut self, law: &str, detail: String) {
        self.violations.push(Violation {
            law: law.into(),
            detail,
            witness: None,
        });
    }

    /// Records a failure with its witness.
    pub fn fail_with(
        &mut self,
        law: &str,
        detail: String,
        generators: Vec<String>,
        lhs: Vec<u64>,
        rhs: Vec<u64>,
    ) {
        self.violations.push(Violation {
            law: law.into(),
            detail,
            witness: Some(Witness {
                generators,
                lhs,
                rhs,
            }),
        });
    }

    /// Appends the violations of another report.
    pub fn merge(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    /// Whether some violation concerns the given law.
    pub fn has_law(&self, law: &str) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", v.law, v.detail)?;
            if let Some(w) = &v.witness {
                write!(f, " [{}] lhs={:?} rhs={:?}", w.generators.join(", "), w.lhs, w.rhs)?;
            }
        }
        Ok(())
    }
}
