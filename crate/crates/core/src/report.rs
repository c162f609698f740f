//! Check outcomes and the versioned report document shared by every suite.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::tensor::EntryWitness;

pub const REPORT_SCHEMA: &str = "cgkit-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

/// Where a check failed and the offending nonzero value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub location: String,
    pub value: String,
}

impl From<&EntryWitness> for Witness {
    fn from(w: &EntryWitness) -> Self {
        Witness {
            location: w.location(),
            value: w.difference.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    #[serde(default)]
    pub timing_ms: Option<u64>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
            detail: None,
            timing_ms: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Witness) -> Self {
        Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness),
            detail: None,
            timing_ms: None,
        }
    }

    pub fn info(name: impl Into<String>, detail: Value) -> Self {
        Check {
            name: name.into(),
            status: Status::Info,
            witness: None,
            detail: Some(detail),
            timing_ms: None,
        }
    }

    /// Pass when `witness` is `None`, otherwise fail with it.
    pub fn from_witness(name: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

pub fn witness(location: impl Into<String>, value: impl ToString) -> Witness {
    Witness {
        location: location.into(),
        value: value.to_string(),
    }
}

/// An ordered group of checks produced by one operation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSet {
    pub checks: Vec<Check>,
}

impl CheckSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: CheckSet) {
        self.checks.extend(other.checks);
    }

    /// Runs `f`, records its check with wall time, and prefixes the name.
    pub fn timed<F>(&mut self, f: F)
    where
        F: FnOnce() -> Check,
    {
        let t = Instant::now();
        let mut c = f();
        c.timing_ms = Some(t.elapsed().as_millis() as u64);
        self.checks.push(c);
    }

    /// True when no check failed.
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Prefixes every check name with `prefix.`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{prefix}.{}", c.name);
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: String,
    pub tool_version: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(command: impl Into<String>, params: BTreeMap<String, String>) -> Self {
        CheckReport {
            schema: REPORT_SCHEMA.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            params,
            checks: Vec::new(),
        }
    }

    pub fn add(&mut self, set: CheckSet) {
        self.checks.extend(set.checks);
    }

    /// Orders checks by name so the output does not depend on evaluation order.
    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn strip_timings(&mut self) {
        for c in &mut self.checks {
            c.timing_ms = None;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips() {
        let mut params = BTreeMap::new();
        params.insert("n".into(), "3".into());
        let mut r = CheckReport::new("r check", params);
        let mut set = CheckSet::new();
        set.push(Check::pass("ybe"));
        set.push(Check::fail("hecke", witness("row [1, 1] col [1, 1]", "q - p")));
        set.push(Check::info("limit", serde_json::json!({"entries": 3})));
        r.add(set);
        r.sort();
        assert_eq!(r.checks[0].name, "hecke");
        assert!(!r.all_pass());
        let back = CheckReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn info_does_not_fail() {
        let mut set = CheckSet::new();
        set.push(Check::info("x", Value::Null));
        assert!(set.all_pass());
    }
}
