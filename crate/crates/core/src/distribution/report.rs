use serde::Serialize;

/// One checked point of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub label: String,
    pub x: f64,
    pub observed: f64,
    pub reference: f64,
    pub pass: bool,
    /// A secondary quantity reported for inspection only.
    pub aux: Option<f64>,
    pub note: Option<String>,
}

impl ReportRow {
    pub fn new(label: impl Into<String>, x: f64, observed: f64, reference: f64, pass: bool) -> Self {
        ReportRow {
            label: label.into(),
            x,
            observed,
            reference,
            pass,
            aux: None,
            note: None,
        }
    }

    pub fn with_aux(mut self, aux: f64) -> Self {
        self.aux = Some(aux);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Grid of checks with observed values, references and verdicts. Individual
/// violations found by exhaustive checks are listed (up to a cap) and counted.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DistReport {
    pub title: String,
    pub rows: Vec<ReportRow>,
    pub violation_count: u64,
    pub violations: Vec<String>,
}

pub(crate) const MAX_LISTED_VIOLATIONS: usize = 100;

impl DistReport {
    pub fn new(title: impl Into<String>) -> Self {
        DistReport {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> u64 {
        self.violation_count + self.rows.iter().filter(|r| !r.pass).count() as u64
    }

    pub(crate) fn violation(&mut self, v: String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED_VIOLATIONS {
            self.violations.push(v);
        }
    }

    pub(crate) fn absorb(&mut self, other: DistReport) {
        self.rows.extend(other.rows);
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < MAX_LISTED_VIOLATIONS {
                self.violations.push(v);
            }
        }
    }
}
