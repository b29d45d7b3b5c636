use serde::{Deserialize, Serialize};

/// Outcome of one axiom check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub pass: bool,
    /// Largest violation seen. For table axioms this is the number of violating tuples.
    pub worst_violation: f64,
}

impl AxiomCheck {
    pub fn threshold(axiom: impl Into<String>, worst: f64, tol: f64) -> Self {
        Self { axiom: axiom.into(), pass: worst <= tol, worst_violation: worst }
    }

    pub fn count(axiom: impl Into<String>, violations: usize) -> Self {
        Self { axiom: axiom.into(), pass: violations == 0, worst_violation: violations as f64 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub checks: Vec<AxiomCheck>,
}

impl Report {
    pub fn push(&mut self, check: AxiomCheck) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
