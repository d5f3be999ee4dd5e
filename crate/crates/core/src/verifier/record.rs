use serde_json::{json, Value};

use super::{Certificate, Evidence, Params, Verdict};
use crate::error::Result;
use crate::polynomial::Polynomial;
use crate::spans::{Membership, SpanEngine, SpanSpec, SpanStatus};
use crate::word::Mode;

/// Accumulates evidence for one claim.
#[derive(Default)]
pub(super) struct Recorder {
    evidence: Vec<Evidence>,
    counterexample: Option<Value>,
    exhausted: Option<String>,
    notes: Vec<String>,
}

impl Recorder {
    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn push(&mut self, label: impl Into<String>, method: &str, verdict: Verdict, detail: Value) {
        let label = label.into();
        if verdict == Verdict::Fail && self.counterexample.is_none() {
            self.counterexample = Some(json!({ "check": label, "detail": detail }));
        }
        if verdict == Verdict::Inconclusive && self.exhausted.is_none() {
            self.exhausted = Some(format!("{label}: {}", detail.get("exhausted").and_then(|e| e.as_str()).unwrap_or("budget")));
        }
        self.evidence.push(Evidence {
            label,
            method: method.to_string(),
            verdict,
            detail,
        });
    }

    pub fn fact(&mut self, label: impl Into<String>, method: &str, ok: bool, detail: Value) {
        self.push(label, method, if ok { Verdict::Pass } else { Verdict::Fail }, detail);
    }

    /// `f == 0` as a free-algebra element.
    pub fn exact_zero(&mut self, label: impl Into<String>, f: &Polynomial) {
        let detail = if f.is_zero() {
            json!({ "difference": "0" })
        } else {
            json!({ "difference": f.to_string() })
        };
        self.fact(label, "exact", f.is_zero(), detail);
    }

    /// Componentwise membership of `f` in `spec`. Returns the verdict.
    pub fn span(&mut self, engine: &mut SpanEngine, label: impl Into<String>, f: &Polynomial, spec: &SpanSpec) -> Result<Verdict> {
        let result = engine.member_poly(f, spec)?;
        let mut parts = Vec::new();
        let mut verdict = Verdict::Pass;
        if let Some(c) = result.constant {
            verdict = Verdict::Fail;
            parts.push(json!({ "multidegree": {}, "verdict": "not_member", "residual": c.to_string() }));
        }
        for c in &result.parts {
            let span = &c.span;
            let mut entry = json!({
                "multidegree": span.multidegree(),
                "spec": span.spec(),
                "status": span.status(),
                "words": span.words().len(),
                "dimension": span.dimension(),
                "verdict": c.result.verdict(),
            });
            match &c.result {
                Membership::Member { .. } => {}
                Membership::NotMember { .. } => {
                    verdict = Verdict::Fail;
                    entry["residual"] = json!(residual_string(span.field(), &c.result));
                    entry["query"] = json!(c.query.to_string());
                }
                Membership::Unknown { .. } => {
                    if verdict == Verdict::Pass {
                        verdict = Verdict::Inconclusive;
                    }
                    if let SpanStatus::Inconclusive { exhausted } = span.status() {
                        if self.exhausted.is_none() {
                            self.exhausted = Some(format!("{}: {exhausted}", span.multidegree()));
                        }
                    }
                }
            }
            parts.push(entry);
        }
        self.push(label, "span", verdict, json!({ "spec": spec.to_string(), "components": parts }));
        Ok(verdict)
    }

    pub fn verdict(&self) -> Verdict {
        self.evidence.iter().map(|e| e.verdict).max().unwrap_or(Verdict::Pass)
    }

    pub fn finish(self, claim: &str, statement: &str, params: Params) -> Certificate {
        let verdict = self.verdict();
        Certificate {
            claim: claim.to_string(),
            statement: statement.to_string(),
            seed: params.seed,
            params,
            verdict,
            evidence: self.evidence,
            counterexample: if verdict == Verdict::Fail { self.counterexample } else { None },
            exhausted: if verdict == Verdict::Inconclusive { self.exhausted } else { None },
            notes: self.notes,
            runtime_ms: None,
        }
    }
}

fn residual_string(field: crate::field::Field, m: &Membership) -> String {
    match m {
        Membership::NotMember { residual } | Membership::Unknown { residual } => {
            Polynomial::from_terms(field, Mode::Unital, residual.iter().cloned())
                .map(|p| p.to_string())
                .unwrap_or_default()
        }
        Membership::Member { .. } => String::new(),
    }
}
