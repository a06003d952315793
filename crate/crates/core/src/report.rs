//! Line-oriented check reports with a JSON mirror.

use std::fmt::Write as _;

use serde::Serialize;

/// Failures stored per check; the counter keeps running past this.
const MAX_STORED_FAILURES: usize = 200;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckTally {
    pub check: String,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<Vec<String>>,
    /// Non-failing observations worth printing, such as recorded witnesses.
    pub notes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub checks: Vec<CheckTally>,
    pub summary: Vec<(String, String)>,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Report { title: title.to_owned(), ..Default::default() }
    }

    fn entry(&mut self, check: &str) -> &mut CheckTally {
        if let Some(i) = self.checks.iter().position(|c| c.check == check) {
            return &mut self.checks[i];
        }
        self.checks.push(CheckTally {
            check: check.to_owned(),
            passed: 0,
            failed: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        });
        self.checks.last_mut().expect("just pushed")
    }

    /// Records one outcome of `check`.
    pub fn record(&mut self, check: &str, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        let e = self.entry(check);
        if ok {
            e.passed += 1;
        } else {
            e.failed += 1;
            if e.failures.len() < MAX_STORED_FAILURES {
                e.failures.push(witness());
            }
        }
    }

    /// Adds pre-counted outcomes.
    pub fn tally(&mut self, check: &str, passed: usize, failures: Vec<Vec<String>>) {
        let e = self.entry(check);
        e.passed += passed;
        e.failed += failures.len();
        for f in failures {
            if e.failures.len() < MAX_STORED_FAILURES {
                e.failures.push(f);
            }
        }
    }

    pub fn note(&mut self, check: &str, witness: Vec<String>) {
        self.entry(check).notes.push(witness);
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.summary.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.summary.push((key.to_owned(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn check(&self, check: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().map(|c| c.passed).sum()
    }

    pub fn is_ok(&self) -> bool {
        self.failures() == 0
    }

    /// Appends the checks and summary of `other`, prefixing check names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            let name = if prefix.is_empty() { c.check } else { format!("{prefix}.{}", c.check) };
            let e = self.entry(&name);
            e.passed += c.passed;
            e.failed += c.failed;
            e.failures.extend(c.failures);
            e.notes.extend(c.notes);
        }
        for (k, v) in other.summary {
            let key = if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
            self.set(&key, v);
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        for c in &self.checks {
            for w in &c.failures {
                let _ = writeln!(out, "FAIL {} {}", c.check, w.join(" "));
            }
            for w in &c.notes {
                let _ = writeln!(out, "NOTE {} {}", c.check, w.join(" "));
            }
            if c.passed + c.failed == 0 && !c.notes.is_empty() {
                continue;
            }
            let status = if c.failed == 0 { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {} passed={} failed={}", c.check, c.passed, c.failed);
        }
        let _ = writeln!(out, "== summary ==");
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k}: {v}");
        }
        let counted = self.checks.iter().filter(|c| c.passed + c.failed > 0 || c.notes.is_empty()).count();
        let _ = writeln!(out, "checks: {counted}");
        let _ = writeln!(out, "failures: {}", self.failures());
        let _ = writeln!(out, "status: {}", if self.is_ok() { "PASS" } else { "FAIL" });
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            title: &'a str,
            checks: &'a [CheckTally],
            summary: serde_json::Map<String, serde_json::Value>,
            failures: usize,
            status: &'static str,
        }
        let summary = self
            .summary
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let doc = Doc {
            title: &self.title,
            checks: &self.checks,
            summary,
            failures: self.failures(),
            status: if self.is_ok() { "PASS" } else { "FAIL" },
        };
        serde_json::to_string_pretty(&doc).expect("report serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree_on_counts() {
        let mut r = Report::new("demo");
        r.record("a", true, Vec::new);
        r.record("a", false, || vec!["x".into(), "y".into()]);
        r.set("size", 3);
        let text = r.to_text();
        assert!(text.contains("FAIL a x y"));
        assert!(text.contains("FAIL a passed=1 failed=1"));
        assert!(text.contains("size: 3"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["failures"], 1);
        assert_eq!(json["checks"][0]["passed"], 1);
        assert_eq!(json["summary"]["size"], "3");
    }
}
