//! Structured pass/fail reports shared by every checking routine.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Outcome counts and failing instances for one named condition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub checked: usize,
    pub failures: Vec<String>,
}

/// Results keyed by `(suite, condition)`, kept in sorted order so output is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    entries: BTreeMap<(String, String), ConditionResult>,
    notes: Vec<String>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Records one evaluated instance of `condition`.
    pub fn record(&mut self, suite: &str, condition: &str, ok: bool, instance: impl FnOnce() -> String) {
        let e = self.entries.entry((suite.to_string(), condition.to_string())).or_default();
        e.checked += 1;
        if !ok {
            e.failures.push(instance());
        }
    }

    /// Registers a condition with zero instances so it still shows up in listings.
    pub fn touch(&mut self, suite: &str, condition: &str) {
        self.entries.entry((suite.to_string(), condition.to_string())).or_default();
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn merge(&mut self, other: Report) {
        for (k, v) in other.entries {
            let e = self.entries.entry(k).or_default();
            e.checked += v.checked;
            e.failures.extend(v.failures);
        }
        self.notes.extend(other.notes);
    }

    pub fn is_ok(&self) -> bool {
        self.entries.values().all(|e| e.failures.is_empty())
    }

    pub fn failure_count(&self) -> usize {
        self.entries.values().map(|e| e.failures.len()).sum()
    }

    pub fn checked_count(&self) -> usize {
        self.entries.values().map(|e| e.checked).sum()
    }

    /// Condition result, if the condition was evaluated at all.
    pub fn condition(&self, suite: &str, condition: &str) -> Option<&ConditionResult> {
        self.entries.get(&(suite.to_string(), condition.to_string()))
    }

    /// True if `condition` has at least one recorded failure.
    pub fn failed(&self, suite: &str, condition: &str) -> bool {
        self.condition(suite, condition).is_some_and(|c| !c.failures.is_empty())
    }

    /// Names of failing conditions as `suite/condition`.
    pub fn failing_conditions(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(_, v)| !v.failures.is_empty())
            .map(|((s, c), _)| format!("{s}/{c}"))
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &ConditionResult)> {
        self.entries.iter().map(|((s, c), r)| (s.as_str(), c.as_str(), r))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let conditions: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((s, c), r)| {
                serde_json::json!({
                    "suite": s,
                    "condition": c,
                    "checked": r.checked,
                    "passed": r.failures.is_empty(),
                    "failures": r.failures,
                })
            })
            .collect();
        serde_json::json!({ "ok": self.is_ok(), "conditions": conditions, "notes": self.notes })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((s, c), r) in &self.entries {
            let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {s}/{c} ({} checked, {} failed)", r.checked, r.failures.len())?;
            for fail in r.failures.iter().take(5) {
                writeln!(f, "    {fail}")?;
            }
            if r.failures.len() > 5 {
                writeln!(f, "    ... {} more", r.failures.len() - 5)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
