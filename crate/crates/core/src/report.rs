//! Check results and report rendering (JSON, text, TAP).

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Exploratory,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// The identity being checked, in plain text.
    #[serde(rename = "paper_eq")]
    pub relation: String,
    pub status: Status,
    pub residual: Option<String>,
    pub ms: u64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Runs `f`, which returns `None` when the identity holds and `Some(residual)`
/// otherwise. Errors count as failures with the error text as residual.
pub fn check(id: &str, relation: &str, f: impl FnOnce() -> Result<Option<String>>) -> CheckResult {
    let t = Instant::now();
    let out = f();
    let ms = t.elapsed().as_millis() as u64;
    let (status, residual) = match out {
        Ok(None) => (Status::Pass, None),
        Ok(Some(r)) => (Status::Fail, Some(r)),
        Err(e) => (Status::Fail, Some(format!("error: {e}"))),
    };
    CheckResult { id: id.into(), relation: relation.into(), status, residual, ms }
}

/// Like [`check`] but never fails: the residual is recorded for information.
pub fn explore(id: &str, relation: &str, f: impl FnOnce() -> Result<Option<String>>) -> CheckResult {
    let mut r = check(id, relation, f);
    if r.status == Status::Fail {
        r.status = Status::Exploratory;
    } else {
        r.status = Status::Exploratory;
        r.residual = Some("0".into());
    }
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub q: String,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Tap,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            "tap" => Ok(Format::Tap),
            _ => Err(format!("unknown format `{s}` (json, text, tap)")),
        }
    }
}

impl Report {
    pub fn new(suite: &str, q: String, mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        Report { suite: suite.into(), q, checks }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Text => {
                let mut out = format!("suite {} (q: {})\n", self.suite, self.q);
                for c in &self.checks {
                    let tag = match c.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Exploratory => "INFO",
                    };
                    out.push_str(&format!("{tag} {:<40} {:>6} ms  {}\n", c.id, c.ms, c.relation));
                    if let Some(r) = &c.residual {
                        if c.status != Status::Pass {
                            out.push_str(&format!("     residual: {r}\n"));
                        }
                    }
                }
                let failed = self.failures().len();
                out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
                out
            }
            Format::Tap => {
                let mut out = format!("1..{}\n", self.checks.len());
                for (k, c) in self.checks.iter().enumerate() {
                    let ok = if c.passed() { "ok" } else { "not ok" };
                    let todo = if c.status == Status::Exploratory { " # TODO exploratory" } else { "" };
                    out.push_str(&format!("{ok} {} - {}{todo}\n", k + 1, c.id));
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report::new(
            "demo",
            "generic".into(),
            vec![
                check("b", "1 = 1", || Ok(None)),
                check("a", "x = 0", || Ok(Some("x".into()))),
                explore("c", "y = 0", || Ok(Some("y".into()))),
            ],
        )
    }

    #[test]
    fn json_has_schema() {
        let r = sample();
        let v: serde_json::Value = serde_json::from_str(&r.emit(Format::Json)).unwrap();
        assert_eq!(v["suite"], "demo");
        assert_eq!(v["checks"][0]["id"], "a");
        assert_eq!(v["checks"][0]["status"], "fail");
        assert_eq!(v["checks"][0]["residual"], "x");
        assert!(v["checks"][1]["residual"].is_null());
    }

    #[test]
    fn tap_line_count() {
        let r = sample();
        assert_eq!(r.emit(Format::Tap).lines().count(), 4);
        assert!(!r.all_passed());
        assert_eq!(r.failures().len(), 1);
    }
}
