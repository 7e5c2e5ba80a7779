//! Runner for the numbered acceptance criteria.
//!
//! Each criterion prints exactly one `PASS` or `FAIL` line. A criterion
//! that panics or overruns its runtime budget fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Result of one criterion body.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }

    /// Passes when every part passes; details are joined.
    pub fn all(parts: Vec<Outcome>) -> Self {
        Outcome {
            passed: parts.iter().all(|p| p.passed),
            detail: parts
                .into_iter()
                .map(|p| p.detail)
                .collect::<Vec<_>>()
                .join("; "),
        }
    }
}

#[derive(Debug, Default)]
pub struct Suite {
    results: Vec<(u32, bool)>,
}

impl Suite {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn run<F>(&mut self, id: u32, title: &str, budget: Duration, body: F) -> bool
    where
        F: FnOnce() -> Outcome,
    {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(body)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".to_string());
            Outcome::new(false, format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let passed = outcome.passed && in_budget;
        let timing = format!(
            "{:.2}s of {}s budget{}",
            elapsed.as_secs_f64(),
            budget.as_secs_f64(),
            if in_budget { "" } else { ", over budget" }
        );
        println!(
            "{} criterion {id}: {title}: {} [{timing}]",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
        self.results.push((id, passed));
        passed
    }

    pub fn failed(&self) -> Vec<u32> {
        self.results
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(id, _)| *id)
            .collect()
    }

    /// Summary line; returns the process exit status.
    pub fn finish(&self) -> i32 {
        let failed = self.failed();
        println!(
            "acceptance: {} of {} criteria passed{}",
            self.results.len() - failed.len(),
            self.results.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failing: {failed:?}")
            }
        );
        i32::from(!failed.is_empty())
    }
}
