use serde::Serialize;

/// One failed check: the axiom or condition name and a witness tuple of element names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
}

/// Outcome of a validation pass. `ok` holds exactly when `violations` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Default)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
    /// Informational lines: checks that were skipped or only partially decidable.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new() -> Self {
        ValidationReport { ok: true, violations: Vec::new(), notes: Vec::new() }
    }

    pub fn push(&mut self, axiom: impl Into<String>, witness: Vec<String>) {
        self.violations.push(Violation { axiom: axiom.into(), witness });
        self.ok = false;
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn merge(&mut self, other: ValidationReport) {
        for v in other.violations {
            self.push(v.axiom, v.witness);
        }
        self.notes.extend(other.notes);
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}
