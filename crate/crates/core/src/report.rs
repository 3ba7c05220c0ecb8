//! Pass/fail/skip verdicts shared by every checker.

use serde::{Deserialize, Serialize};

/// Witness lists are truncated to this many entries.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skipped => "skipped",
        })
    }
}

/// Result of one identity or property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Stable machine name, e.g. `moufang.left`.
    pub check: String,
    /// The identity or property being verified, in plain notation.
    pub statement: String,
    pub outcome: Outcome,
    /// Number of cases examined.
    pub cases: u64,
    pub sampled: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Why the check was skipped, or a note on how it was run.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witnesses: Vec<String>,
    /// Total number of violations found (witnesses are truncated).
    #[serde(skip_serializing_if = "is_zero", default)]
    pub violations: u64,
}

fn is_zero(v: &u64) -> bool {
    *v == 0
}

impl CheckReport {
    pub fn new(check: impl Into<String>, statement: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            statement: statement.into(),
            outcome: Outcome::Pass,
            cases: 0,
            sampled: false,
            seed: None,
            reason: None,
            witnesses: Vec::new(),
            violations: 0,
        }
    }

    pub fn skipped(check: impl Into<String>, statement: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut r = CheckReport::new(check, statement);
        r.outcome = Outcome::Skipped;
        r.reason = Some(reason.into());
        r
    }

    /// Records one examined case.
    pub fn case(&mut self) {
        self.cases += 1;
    }

    /// Records a violation; the check fails.
    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.violations += 1;
        self.outcome = Outcome::Fail;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness());
        }
    }

    /// Records a case and its verdict.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.case();
        if !ok {
            self.fail(witness);
        }
    }

    pub fn with_sampling(mut self, sampled: bool, seed: u64) -> Self {
        self.sampled = sampled;
        if sampled {
            self.seed = Some(seed);
        }
        self
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    pub fn summary_line(&self) -> String {
        let mut s = format!("{:<34} {:<8} cases={}", self.check, self.outcome, self.cases);
        if self.sampled {
            s.push_str(&format!(" sampled(seed={})", self.seed.unwrap_or_default()));
        }
        if let Some(r) = &self.reason {
            s.push_str(&format!(" [{r}]"));
        }
        if let Some(w) = self.witnesses.first() {
            s.push_str(&format!(" witness: {w}"));
        }
        s
    }
}

/// A group of related checks, e.g. every clause of the triality predicate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn push(&mut self, c: CheckReport) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome == Outcome::Pass)
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.outcome == Outcome::Fail)
    }

    pub fn get(&self, check: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn outcome(&self, check: &str) -> Option<Outcome> {
        self.get(check).map(|c| c.outcome)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.failed())
            .map(|c| c.check.as_str())
            .collect()
    }
}
