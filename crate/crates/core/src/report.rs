//! Check reports and the bounded instance sweeper shared by every law checker.
//!
//! A law is checked over one or more *families* of instances. A family is a
//! box of index vectors (one coordinate per free input); the sweeper walks it
//! in lexicographic order, or draws a seeded sample when the box is larger
//! than the configured threshold. The first failing instance in walk order is
//! kept as the witness, so reports are deterministic.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

/// How much of the instance space a check actually covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    /// Every instance over complete carriers was evaluated.
    Exhaustive,
    /// Every enumerated instance was evaluated, but some carrier was truncated.
    Incomplete,
    /// At least one family exceeded the threshold and was sampled.
    Sampled,
}

/// Which axiomatisation a substitution-algebra report was produced from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Equations,
    Diagrams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub coverage: Coverage,
    pub instances: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    /// A check decided by a single comparison rather than a sweep.
    pub fn single(name: impl Into<String>, ok: bool, witness: Option<Value>) -> Self {
        CheckResult {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            coverage: Coverage::Exhaustive,
            instances: 1,
            witness: if ok { None } else { witness },
            note: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub overall: Status,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            mode: None,
            overall: Status::Pass,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn push(&mut self, check: CheckResult) {
        if !check.passed() {
            self.overall = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.overall.is_pass()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of the failing checks, in report order.
    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn coverage(&self) -> Coverage {
        self.checks
            .iter()
            .map(|c| c.coverage)
            .max()
            .unwrap_or(Coverage::Exhaustive)
    }

    /// Stable plain-text rendering.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            Some(Mode::Equations) => " [equations]",
            Some(Mode::Diagrams) => " [diagrams]",
            None => "",
        };
        let _ = writeln!(
            out,
            "{}{}: {}",
            self.subject,
            mode,
            status_word(self.overall)
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {} ({} instances, {})",
                status_word(c.status),
                c.name,
                c.instances,
                coverage_word(c.coverage)
            );
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "      witness: {}", w);
            }
            if let Some(n) = &c.note {
                let _ = writeln!(out, "      note: {}", n);
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {}", n);
        }
        out
    }
}

pub fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
    }
}

fn coverage_word(c: Coverage) -> &'static str {
    match c {
        Coverage::Exhaustive => "exhaustive",
        Coverage::Incomplete => "incomplete carriers",
        Coverage::Sampled => "sampled",
    }
}

/// When to switch from exhaustive enumeration to seeded sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    /// Families with more instances than this are sampled; `None` never samples.
    pub threshold: Option<u64>,
    pub seed: u64,
}

impl Sampling {
    pub const DEFAULT_THRESHOLD: u64 = 100_000;

    pub fn exhaustive() -> Self {
        Sampling {
            threshold: None,
            seed: 0,
        }
    }

    pub fn threshold(threshold: u64, seed: u64) -> Self {
        Sampling {
            threshold: Some(threshold),
            seed,
        }
    }
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling::threshold(Self::DEFAULT_THRESHOLD, 0)
    }
}

/// `{"instance": .., "lhs": .., "rhs": ..}`
pub fn witness<I: Serialize + ?Sized, L: Serialize + ?Sized, R: Serialize + ?Sized>(
    instance: &I,
    lhs: &L,
    rhs: &R,
) -> Value {
    serde_json::json!({
        "instance": to_value(instance),
        "lhs": to_value(lhs),
        "rhs": to_value(rhs),
    })
}

pub(crate) fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or_else(|e| Value::String(format!("<unserializable: {e}>")))
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Accumulates the outcome of one named law over all of its families.
pub(crate) struct Tally<'s> {
    name: String,
    sampling: &'s Sampling,
    instances: u64,
    sampled: bool,
    incomplete: bool,
    families: u64,
    witness: Option<Value>,
}

impl<'s> Tally<'s> {
    pub fn new(name: impl Into<String>, sampling: &'s Sampling) -> Self {
        Tally {
            name: name.into(),
            sampling,
            instances: 0,
            sampled: false,
            incomplete: false,
            families: 0,
            witness: None,
        }
    }

    pub fn mark_incomplete(&mut self, incomplete: bool) {
        self.incomplete |= incomplete;
    }

    pub fn failed(&self) -> bool {
        self.witness.is_some()
    }

    /// Record a single already-evaluated instance.
    pub fn record(&mut self, outcome: Option<Value>) {
        if self.failed() {
            return;
        }
        self.instances += 1;
        self.witness = outcome;
    }

    /// Evaluate `visit` over every index vector of the box `dims`, or over a
    /// seeded sample when the box is too large. Stops at the first witness.
    pub fn sweep<F>(&mut self, dims: &[usize], mut visit: F) -> Result<()>
    where
        F: FnMut(&[usize]) -> Result<Option<Value>>,
    {
        if self.failed() {
            return Ok(());
        }
        self.families += 1;
        if dims.contains(&0) {
            return Ok(());
        }
        let total = dims
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128));
        let over = match (self.sampling.threshold, total) {
            (None, _) => false,
            (Some(t), Some(n)) => n > t as u128,
            (Some(_), None) => true,
        };
        if over {
            let budget = self.sampling.threshold.unwrap_or(0);
            let salt = fnv1a(self.name.as_bytes()) ^ self.families.wrapping_mul(0x9e37_79b9_7f4a_7c15);
            let mut rng = ChaCha8Rng::seed_from_u64(self.sampling.seed ^ salt);
            let mut idx = vec![0usize; dims.len()];
            self.sampled = true;
            for _ in 0..budget {
                for (slot, &d) in idx.iter_mut().zip(dims) {
                    *slot = rng.gen_range(0..d);
                }
                self.instances += 1;
                if let Some(w) = visit(&idx)? {
                    self.witness = Some(w);
                    return Ok(());
                }
            }
            return Ok(());
        }
        let mut idx = vec![0usize; dims.len()];
        loop {
            self.instances += 1;
            if let Some(w) = visit(&idx)? {
                self.witness = Some(w);
                return Ok(());
            }
            // odometer, last coordinate fastest
            let mut k = dims.len();
            loop {
                if k == 0 {
                    return Ok(());
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    pub fn finish(self) -> CheckResult {
        let coverage = if self.sampled {
            Coverage::Sampled
        } else if self.incomplete {
            Coverage::Incomplete
        } else {
            Coverage::Exhaustive
        };
        CheckResult {
            name: self.name,
            status: if self.witness.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            coverage,
            instances: self.instances,
            witness: self.witness,
            note: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_visits_every_index_in_lexicographic_order() {
        let s = Sampling::exhaustive();
        let mut t = Tally::new("order", &s);
        let mut seen = Vec::new();
        t.sweep(&[2, 3], |i| {
            seen.push(i.to_vec());
            Ok(None)
        })
        .unwrap();
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 0]);
        assert_eq!(seen[1], vec![0, 1]);
        assert_eq!(seen[5], vec![1, 2]);
        let r = t.finish();
        assert!(r.passed());
        assert_eq!(r.instances, 6);
        assert_eq!(r.coverage, Coverage::Exhaustive);
    }

    #[test]
    fn empty_dims_run_once_and_zero_dims_never() {
        let s = Sampling::exhaustive();
        let mut t = Tally::new("x", &s);
        let mut n = 0;
        t.sweep(&[], |_| {
            n += 1;
            Ok(None)
        })
        .unwrap();
        t.sweep(&[3, 0], |_| {
            n += 1;
            Ok(None)
        })
        .unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn sampling_is_seeded_and_reported() {
        let s = Sampling::threshold(10, 7);
        let collect = || {
            let mut t = Tally::new("sampled", &s);
            let mut seen = Vec::new();
            t.sweep(&[100, 100], |i| {
                seen.push(i.to_vec());
                Ok(None)
            })
            .unwrap();
            (seen, t.finish())
        };
        let (a, ra) = collect();
        let (b, _) = collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        assert_eq!(ra.coverage, Coverage::Sampled);
    }

    #[test]
    fn first_failure_stops_the_sweep() {
        let s = Sampling::exhaustive();
        let mut t = Tally::new("stop", &s);
        t.sweep(&[5], |i| Ok((i[0] == 2).then(|| Value::from(i[0]))))
            .unwrap();
        t.sweep(&[5], |_| panic!("family after a failure must be skipped"))
            .unwrap();
        let r = t.finish();
        assert!(!r.passed());
        assert_eq!(r.instances, 3);
        assert_eq!(r.witness, Some(Value::from(2)));
    }

    #[test]
    fn report_overall_tracks_checks() {
        let mut r = Report::new("demo");
        r.push(CheckResult::single("a", true, None));
        assert!(r.passed());
        r.push(CheckResult::single("b", false, Some(Value::from(1))));
        assert!(!r.passed());
        assert_eq!(r.failures(), vec!["b"]);
        assert!(r.render_text().contains("[FAIL] b"));
    }
}
