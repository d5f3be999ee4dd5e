//! Catalog of machine-checked claims about central polynomials of Grassmann
//! algebras, each producing a [`Certificate`].
//!
//! Congruences modulo `T3` are checked on distinct generic variables: `T3`
//! is closed under substitution, so membership of the generic instance
//! implies the congruence for all arguments.

mod catalog;
mod record;
pub mod registry;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::spans::{Budget, SpanEngine};

pub use catalog::{
    bss_consistency, claim_info, frobenius_instances, kappa_add_coefficients, s2_spss_support, xp_w_instances, ClaimInfo,
    ClaimKind, CLAIMS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    /// Process exit status for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Number of Grassmann generators for sampled checks.
    pub n: u32,
    pub seed: u64,
    pub budget: Budget,
}

impl Params {
    pub fn new(p: u32) -> Self {
        Params {
            p,
            m: None,
            n: 10,
            seed: 0,
            budget: Budget::default(),
        }
    }
}

/// One check inside a claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub label: String,
    /// `exact`, `span`, `normal_form`, `support` or `evaluation`.
    pub method: String,
    pub verdict: Verdict,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub statement: String,
    pub params: Params,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhausted: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Wall-clock milliseconds; left out of serialized output unless set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    pub seed: u64,
}

/// Runs catalog entries, sharing span computations between them.
pub struct Verifier {
    field: Field,
    params: Params,
    engine: SpanEngine,
}

impl Verifier {
    pub fn new(params: Params) -> Result<Self> {
        let field = Field::new(params.p)?;
        if params.n == 0 || params.n > 63 {
            return Err(Error::InvalidParameter(format!("N must be in 1..=63, got {}", params.n)));
        }
        Ok(Verifier {
            field,
            engine: SpanEngine::new(field, params.budget),
            params,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Runs the catalog entry `key`; `m` overrides the entry's default.
    pub fn verify(&mut self, key: &str, m: Option<u32>) -> Result<Certificate> {
        let info = claim_info(key).ok_or_else(|| Error::InvalidParameter(format!("unknown claim '{key}'")))?;
        let mut params = self.params.clone();
        params.m = m.or(info.default_m);
        let start = Instant::now();
        let mut rec = record::Recorder::default();
        catalog::run(self, info, params.m, &mut rec)?;
        let elapsed = start.elapsed().as_millis() as u64;
        let mut cert = rec.finish(info.key, info.statement, params);
        cert.runtime_ms = Some(elapsed);
        Ok(cert)
    }

    /// Runs every claim (not the negative controls) in catalog order.
    pub fn verify_all(&mut self) -> Result<Vec<Certificate>> {
        CLAIMS
            .iter()
            .filter(|c| c.kind == ClaimKind::Claim)
            .map(|c| self.verify(c.key, None))
            .collect()
    }
}

/// `U_m < U_{m+1}` at the given `m`.
pub fn chain_strictness(params: Params, m: u32) -> Result<Certificate> {
    Verifier::new(params)?.verify("chain-strict", Some(m))
}

/// The decomposition of `phi'_m` modulo `T3`, with the sign of `w_m` reported.
pub fn phi_prime_decomposition(params: Params, m: u32) -> Result<Certificate> {
    Verifier::new(params)?.verify("phi-prime-decomp", Some(m))
}

impl Certificate {
    /// Serialized form without the runtime, so reruns compare equal.
    pub fn to_json(&self, with_runtime: bool) -> serde_json::Value {
        let mut c = self.clone();
        if !with_runtime {
            c.runtime_ms = None;
        }
        serde_json::to_value(c).expect("certificates serialize")
    }
}
