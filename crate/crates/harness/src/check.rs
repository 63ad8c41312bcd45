//! Loads a dump and runs every structural check on it.

use std::fmt;

use bptree::dump::{self, ParseError};
use bptree::refinement::{check_structure, checks};
use bptree::Strategy;

use crate::Key;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok { "ok" } else { "fail" };
        if self.detail.is_empty() {
            write!(f, "CHECK {} {status}", self.name)
        } else {
            write!(f, "CHECK {} {status} {}", self.name, self.detail)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    pub fn failed(&self, name: &str) -> bool {
        self.lines.iter().any(|l| l.name == name && !l.ok)
    }

    pub fn render(&self) -> String {
        self.lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// Parses `text` as a dump and checks it. Only a malformed dump is an
/// error; failed checks are part of the report.
pub fn check_dump(text: &str) -> Result<CheckReport, ParseError> {
    let parsed = dump::parse::<Key>(text)?;
    let over = parsed.capacity_violations();
    if !over.is_empty() {
        let lines = over
            .into_iter()
            .map(|e| CheckLine {
                name: checks::CAPACITY,
                ok: false,
                detail: e.to_string(),
            })
            .collect();
        return Ok(CheckReport { lines });
    }
    let tree = parsed.load(Strategy::Binary).expect("capacity checked");
    let report = check_structure(&tree);
    let names: Vec<&'static str> = if report.failed(checks::ABSTRACTION) {
        vec![checks::ABSTRACTION]
    } else {
        checks::VIEW_SPLIT.iter().chain(&checks::INVARIANTS).copied().collect()
    };
    let lines = report
        .rows(&names)
        .map(|(name, ok, detail)| CheckLine { name, ok, detail })
        .collect();
    Ok(CheckReport { lines })
}
