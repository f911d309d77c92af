//! Check reports: one `{check, index, status, witness}` record per check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Not evaluated (unmet precondition).
    Skip,
    /// Diagnostic value, never a failure.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub index: Option<usize>,
    pub status: Status,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(
        &mut self,
        check: impl Into<String>,
        index: Option<usize>,
        status: Status,
        witness: impl Into<String>,
    ) {
        self.records.push(CheckRecord {
            check: check.into(),
            index,
            status,
            witness: witness.into(),
        });
    }

    /// Records `Pass` or `Fail` depending on `ok`.
    pub fn check(&mut self, check: &str, index: usize, ok: bool, witness: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(check, Some(index), status, witness);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    /// One row per check; columns `check,index,status,witness`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check", "index", "status", "witness"])
            .map_err(|e| Error::Serialize(e.to_string()))?;
        for r in &self.records {
            let index = r.index.map(|i| i.to_string()).unwrap_or_default();
            let status = serde_json::to_value(r.status)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default();
            w.write_record([r.check.as_str(), &index, &status, &r.witness])
                .map_err(|e| Error::Serialize(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_shapes() {
        let mut r = Report::new();
        r.check("recurrence.trace", 0, true, "tr ok");
        r.push("hypotheses", None, Status::Fail, "det(y0,y1,y2)=0, \"quoted\"");
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().check, "hypotheses");

        let csv = r.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("check,index,status,witness"));
        assert_eq!(lines.next(), Some("recurrence.trace,0,pass,tr ok"));
        assert!(lines.next().unwrap().starts_with("hypotheses,,fail,"));

        let back: Report = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
