//! Value object returned by every inequality check.

use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    /// The bound is uninformative for these inputs (e.g. `ε + ε′ ≥ 1`).
    Vacuous,
    /// A precondition failed, so the inequality was not evaluated.
    Blocked,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Vacuous => "vacuous",
            Status::Blocked => "blocked",
        }
    }
}

/// `lhs ≤ rhs` for one statement on concrete inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `rhs - lhs`.
    pub slack: f64,
    pub status: Status,
    pub inputs: BTreeMap<String, String>,
    pub caveats: Vec<String>,
    pub diagnostics: BTreeMap<String, f64>,
    pub seed: Option<u64>,
}

impl InequalityReport {
    /// Relative tolerance of the `holds` test.
    pub const RELATIVE_TOLERANCE: f64 = 1e-12;

    pub fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let holds = lhs <= rhs + Self::RELATIVE_TOLERANCE * rhs.abs();
        InequalityReport {
            name: name.to_string(),
            lhs,
            rhs,
            holds,
            slack: rhs - lhs,
            status: if holds { Status::Holds } else { Status::Fails },
            inputs: BTreeMap::new(),
            caveats: Vec::new(),
            diagnostics: BTreeMap::new(),
            seed: None,
        }
    }

    pub fn blocked(name: &str, reason: &str) -> Self {
        let mut r = InequalityReport::new(name, f64::NAN, f64::NAN);
        r.status = Status::Blocked;
        r.caveats.push(reason.to_string());
        r
    }

    pub fn vacuous(mut self, reason: &str) -> Self {
        self.status = Status::Vacuous;
        self.caveats.push(reason.to_string());
        self
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn caveat(mut self, text: &str) -> Self {
        self.caveats.push(text.to_string());
        self
    }

    pub fn diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Holds or vacuous.
    pub fn is_ok(&self) -> bool {
        matches!(self.status, Status::Holds | Status::Vacuous)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_and_status() {
        assert!(InequalityReport::new("x", 1.0 + 1e-13, 1.0).holds);
        assert!(!InequalityReport::new("x", 1.0 + 1e-11, 1.0).holds);
        assert!(!InequalityReport::new("x", f64::NAN, 1.0).holds);
        let v = InequalityReport::new("x", 2.0, 1.0).vacuous("ε + ε′ ≥ 1");
        assert!(v.is_ok() && !v.holds);
        assert!(!InequalityReport::blocked("x", "no").is_ok());
        assert_eq!(InequalityReport::new("x", 0.25, 1.0).slack, 0.75);
    }
}
