//! Validation reports: named deviations checked against thresholds.

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Informational checks are reported but never fail a report.
    pub required: bool,
    pub note: Option<String>,
}

impl Check {
    /// Passes when `deviation < threshold`; NaN never passes.
    pub fn max_deviation(name: impl Into<String>, deviation: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            deviation,
            threshold,
            passed: deviation < threshold,
            required: true,
            note: None,
        }
    }

    pub fn informational(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }

    /// True when every required check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.required)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
