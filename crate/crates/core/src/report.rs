//! Verification reports shared by the formula checks and the transfer suites.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Failure witnesses kept per report; further failures are only counted.
pub const MAX_WITNESSES: usize = 64;

/// One closed sentence and the value it was computed to have.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub sentence: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// `true` for a failed check, `false` for a reported find (a
    /// counterexample that was searched for, a demonstrator trace).
    pub failure: bool,
    pub logic: String,
    pub implication: String,
    pub claim: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evaluations: Vec<Evaluation>,
}

impl Witness {
    pub fn new(logic: &str, implication: &str, claim: impl Into<String>) -> Witness {
        Witness {
            failure: true,
            logic: logic.to_string(),
            implication: implication.to_string(),
            claim: claim.into(),
            evaluations: Vec::new(),
        }
    }

    pub fn found(mut self) -> Witness {
        self.failure = false;
        self
    }

    pub fn eval(mut self, sentence: impl Into<String>, value: impl Into<String>) -> Witness {
        self.evaluations.push(Evaluation { sentence: sentence.into(), value: value.into() });
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, Value>,
    pub checked: u64,
    pub failed: u64,
    pub witnesses: Vec<Witness>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> VerificationReport {
        VerificationReport { suite: suite.to_string(), ..Default::default() }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> VerificationReport {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    /// Counts one instance; on failure builds and keeps the witness.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Witness) -> bool {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failure_witnesses() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
        ok
    }

    pub fn record(&mut self, w: Witness) {
        self.witnesses.push(w);
    }

    pub fn failure_witnesses(&self) -> usize {
        self.witnesses.iter().filter(|w| w.failure).count()
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    /// Adds another report's counts and witnesses. Parameters of `other`
    /// are kept under its suite name when they differ.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        let room = MAX_WITNESSES.saturating_sub(self.failure_witnesses());
        let (fail, found): (Vec<_>, Vec<_>) = other.witnesses.into_iter().partition(|w| w.failure);
        self.witnesses.extend(fail.into_iter().take(room));
        self.witnesses.extend(found);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "{status} {}: {} checked, {} failed", self.suite, self.checked, self.failed);
        for (k, v) in &self.params {
            let v = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "  {k}: {v}");
        }
        for w in &self.witnesses {
            let tag = if w.failure { "failure" } else { "found" };
            let _ = writeln!(s, "  {tag} [{} / {}] {}", w.logic, w.implication, w.claim);
            for e in &w.evaluations {
                let _ = writeln!(s, "    {} = {}", e.sentence, e.value);
            }
        }
        s
    }
}
