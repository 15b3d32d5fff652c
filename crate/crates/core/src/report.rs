//! Pass/fail tallies shared by the verifiers, with an aligned text rendering.

use std::fmt::Write as _;

use serde::Serialize;

/// How many example violations a check keeps.
pub const MAX_EXAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    pub examples: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            checked: 0,
            violations: 0,
            examples: Vec::new(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(example());
            }
        }
    }

    /// Fold another tally of the same property into this one.
    pub fn merge(&mut self, other: &Check) {
        self.checked += other.checked;
        self.violations += other.violations;
        let room = MAX_EXAMPLES.saturating_sub(self.examples.len());
        self.examples
            .extend(other.examples.iter().take(room).cloned());
    }

    pub(crate) fn absorb(&mut self, checked: u64, failures: Vec<String>) {
        self.checked += checked;
        self.violations += failures.len() as u64;
        let room = MAX_EXAMPLES.saturating_sub(self.examples.len());
        self.examples.extend(failures.into_iter().take(room));
    }
}

pub fn render_checks(title: &str, checks: &[Check]) -> String {
    let width = checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(4)
        .max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    let _ = writeln!(
        out,
        "  {:<width$}  {:>6}  {:>12}  {:>10}",
        "check", "status", "checked", "violations"
    );
    for c in checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(
            out,
            "  {:<width$}  {:>6}  {:>12}  {:>10}",
            c.name, status, c.checked, c.violations
        );
        if let Some(n) = &c.note {
            let _ = writeln!(out, "  {:<width$}  note: {n}", "");
        }
        for e in &c.examples {
            let _ = writeln!(out, "  {:<width$}  - {e}", "");
        }
    }
    out
}
