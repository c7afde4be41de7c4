//! Itemized validation reports shared by the polytope and fan modules.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One validation check with its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

/// Aggregated outcome of validating an input object. Failed checks are
/// itemized diagnostics, not exceptions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub items: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, check: &str, passed: bool, detail: String) {
        self.items.push(Diagnostic {
            check: String::from(check),
            passed,
            detail,
        });
    }

    pub fn is_valid(&self) -> bool {
        self.items.iter().all(|d| d.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Diagnostic> {
        self.items.iter().filter(|d| !d.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.items {
            writeln!(
                f,
                "{} {}: {}",
                if d.passed { "ok  " } else { "FAIL" },
                d.check,
                d.detail
            )?;
        }
        Ok(())
    }
}
