//! Runner for numbered acceptance criteria with runtime budgets.
//!
//! Each criterion is a plain function returning an [`Outcome`]. The runner
//! times it, fails it when it overruns its budget and prints one line per
//! criterion.

use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub budget: Duration,
    pub run: fn() -> Outcome,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u32,
    pub name: &'static str,
    pub outcome: Outcome,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Verdict {
    pub fn in_time(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn pass(&self) -> bool {
        self.outcome.pass && self.in_time()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {}: {} ({:.2?}, budget {:?}{})",
            self.id,
            if self.pass() { "PASS" } else { "FAIL" },
            self.name,
            self.outcome.detail,
            self.elapsed,
            self.budget,
            if self.in_time() { "" } else { ", over budget" },
        )
    }
}

pub fn evaluate(c: &Criterion) -> Verdict {
    let start = Instant::now();
    let outcome = (c.run)();
    Verdict {
        id: c.id,
        name: c.name,
        outcome,
        elapsed: start.elapsed(),
        budget: c.budget,
    }
}

/// Runs every criterion in order, printing each verdict as it completes.
/// Returns the ids of the failed criteria.
pub fn run_all(criteria: &[Criterion]) -> Vec<u32> {
    let mut failed = Vec::new();
    for c in criteria {
        let v = evaluate(c);
        println!("{v}");
        if !v.pass() {
            failed.push(v.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!(
            "acceptance: {} of {} criteria failed: {:?}",
            failed.len(),
            criteria.len(),
            failed
        );
    }
    failed
}
