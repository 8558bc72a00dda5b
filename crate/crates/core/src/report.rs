//! Verification reports shared by the library verifiers and the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const MAX_WITNESSES: usize = 10;

/// One named property, swept over `total` instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub total: u64,
    pub failed: u64,
    pub witnesses: Vec<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Check {
        Check { name: name.into(), total: 0, failed: 0, witnesses: Vec::new() }
    }

    /// Counts one instance; the witness closure only runs on failure.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.total += 1;
        if !ok {
            self.failed += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    pub elapsed_ms: u64,
    /// Recorded values that are not pass/fail properties.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observations: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Value) -> Report {
        Report { command: command.into(), inputs, checks: Vec::new(), elapsed_ms: 0, observations: BTreeMap::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn observe(&mut self, key: impl Into<String>, value: Value) {
        self.observations.insert(key.into(), value);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Appends another report's checks and observations, prefixing names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
        for (k, v) in other.observations {
            self.observations.insert(format!("{prefix}.{k}"), v);
        }
    }
}
