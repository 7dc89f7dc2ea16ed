//! Check reports shared by every verifier in the crate.
//!
//! A [`Report`] is an ordered list of named checks. Each check ends in one of
//! three states: it passed, it failed with a concrete witness, or the bounded
//! search behind it ran out of room before reaching a verdict.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A counterexample: the offending element (or edge, or vertex) indices plus a
/// human readable explanation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub indices: Vec<usize>,
    pub detail: String,
}

impl Witness {
    pub fn new(indices: impl Into<Vec<usize>>, detail: impl Into<String>) -> Self {
        Witness {
            indices: indices.into(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail { witness: Witness },
    Inconclusive { reason: String },
}

impl Outcome {
    pub fn fail(indices: impl Into<Vec<usize>>, detail: impl Into<String>) -> Self {
        Outcome::Fail {
            witness: Witness::new(indices, detail),
        }
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Outcome::Inconclusive {
            reason: reason.into(),
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Outcome::Fail { witness } => Some(witness),
            _ => None,
        }
    }

    /// `Pass` when `failure` is `None`.
    pub fn from_failure(failure: Option<Witness>) -> Self {
        match failure {
            None => Outcome::Pass,
            Some(witness) => Outcome::Fail { witness },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    /// Informational lines that do not affect the verdict.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Overall verdict of a report, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// Process exit code: 0 pass, 1 fail, 3 inconclusive. Code 2 is reserved
    /// for input errors, which never produce a report.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        }
    }
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, outcome: Outcome) {
        self.checks.push(Check {
            name: name.into(),
            outcome,
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// Appends every check of `other`, prefixing names with `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for check in other.checks {
            let name = if prefix.is_empty() {
                check.name
            } else {
                format!("{prefix}.{}", check.name)
            };
            self.checks.push(Check {
                name,
                outcome: check.outcome,
            });
        }
        self.notes.extend(other.notes);
    }

    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.outcome)
    }

    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .map(|c| match c.outcome {
                Outcome::Pass => Verdict::Pass,
                Outcome::Inconclusive { .. } => Verdict::Inconclusive,
                Outcome::Fail { .. } => Verdict::Fail,
            })
            .max()
            .unwrap_or(Verdict::Pass)
    }

    pub fn all_pass(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.outcome.is_fail())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {}", self.title)?;
        for check in &self.checks {
            match &check.outcome {
                Outcome::Pass => writeln!(f, "  PASS  {}", check.name)?,
                Outcome::Fail { witness } => writeln!(
                    f,
                    "  FAIL  {}  witness {:?}: {}",
                    check.name, witness.indices, witness.detail
                )?,
                Outcome::Inconclusive { reason } => {
                    writeln!(f, "  INCONCLUSIVE  {}: {}", check.name, reason)?
                }
            }
        }
        for line in &self.notes {
            writeln!(f, "  note: {line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_takes_the_worst_outcome() {
        let mut r = Report::new("t");
        assert_eq!(r.verdict(), Verdict::Pass);
        r.push("a", Outcome::Pass);
        r.push("b", Outcome::inconclusive("bound"));
        assert_eq!(r.verdict(), Verdict::Inconclusive);
        r.push("c", Outcome::fail(vec![1, 2], "broken"));
        assert_eq!(r.verdict(), Verdict::Fail);
        assert_eq!(r.verdict().exit_code(), 1);
        assert_eq!(r.first_failure().unwrap().name, "c");
    }

    #[test]
    fn json_shape_is_flat() {
        let mut r = Report::new("t");
        r.push("x", Outcome::fail(vec![3], "why"));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["checks"][0]["status"], "fail");
        assert_eq!(v["checks"][0]["witness"]["indices"][0], 3);
    }
}
