//! Every statement of the underlying theory, mapped either to catalog
//! entries or to the reason it is not machine-checked.

use serde::Serialize;

use super::catalog::claim_info;

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "detail")]
pub enum Coverage {
    /// Checked by these catalog keys.
    Claims(&'static [&'static str]),
    /// Not checked, with the reason.
    OutOfScope(&'static str),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Statement {
    pub name: &'static str,
    pub summary: &'static str,
    pub coverage: Coverage,
}

const fn s(name: &'static str, summary: &'static str, coverage: Coverage) -> Statement {
    Statement { name, summary, coverage }
}

use Coverage::{Claims, OutOfScope};

pub const STATEMENTS: &[Statement] = &[
    s("commutator identities", "seven commutator identities, exact or mod T3",
        Claims(&["L-handy-i", "L-handy-ii", "L-handy-iii", "L-handy-iv", "L-handy-v", "L-handy-vi", "L-handy-vii"])),
    s("alternative description", "commuting a power of x1 out of [x2, x1^(a+1) x2^b u] for central u", Claims(&["L-alt-desc"])),
    s("identities of G0", "T(G0) = {x^p}^T0 + T3", Claims(&["L-sid"])),
    s("central polynomials of G0", "CP(G0) = S2 + {w_m}^S + T(G0) (imported result)",
        OutOfScope("imported description of CP(G0); used as input, not re-proved")),
    s("BSS basis", "BSS words form a basis of k0<X>/T(G0)", Claims(&["L-bss-consistency", "L-sid"])),
    s("S2 in SPSS", "S2 + T(G0) lies in <SPSS> + T(G0)", Claims(&["L-s2-spss"])),
    s("w_m outside S2 + T(G0)", "w_m is not in S2 + T(G0)", Claims(&["C-fund"])),
    s("kappa additivity", "kappa(u, v+w) modulo T3 with explicit corrections", Claims(&["L-kappa-add"])),
    s("w additivity", "w_m is additive in each argument mod S2 + T3", Claims(&["C-w-add"])),
    s("kappa multiplicativity", "kappa(u, vw) = v^p kappa(u,w) + w^p kappa(u,v) mod T3", Claims(&["L-kappa-mult"])),
    s("kappa of a product", "kappa(u, vw) = 0 mod T(G0)", Claims(&["C-kappa-vw-zero"])),
    s("W sets", "definition of W_m via strictly increasing index maps", Claims(&["chain-strict"])),
    s("strict chains", "a strictly increasing union of T-spaces is not finitely based",
        OutOfScope("a set-theoretic argument with no finite computational content")),
    s("basis of CP(G0) quotient", "W gives a basis of CP(G0)/(S2 + T(G0))", Claims(&["chain-strict", "C-fund"])),
    s("CP(G0) not finitely based", "infinite chain statement", Claims(&["chain-strict"])),
    s("W^S + T(G0) not finitely based", "consequence of the previous statement",
        OutOfScope("infinite statement; follows formally from the chain")),
    s("W^S not finitely based", "consequence of the previous statement",
        OutOfScope("infinite statement; follows formally from the chain")),
    s("unitary additivity", "w_m(x_i + a_i) = w_m mod S2 + T3", Claims(&["L-w-add-unitary"])),
    s("representation of CP(G)", "CP(G) = S2 + {x0^p w_m}^S0 + {w_m}^S + T(G)", Claims(&["L-rep-cp-closure"])),
    s("w_m outside the unitary space", "w_m is not in S2 + {x0^p w_j}^S0 + T(G)", Claims(&["L-not-in-unitary", "tg-finite-field-identity"])),
    s("unitary multiplicativity", "w_m with a product argument lies in {x0^p w_j}^S0 + T(G)", Claims(&["L-wm-mult-unitary"])),
    s("unitary quotient basis", "{1} and W give a basis of CP(G) modulo S2 + {x0^p w_m}^S0 + T(G)",
        OutOfScope("the T-space {x0^p w_m}^S0 has no tractable truncated span; covered through its ingredients")),
    s("CP(G) not finitely based", "infinite chain statement, unitary case", Claims(&["L-not-in-unitary", "L-wm-mult-unitary"])),
    s("(W')^S + T(G) not finitely based", "consequence of the previous statement",
        OutOfScope("infinite statement; follows formally from the chain")),
    s("(W')^S not finitely based", "consequence of the previous statement",
        OutOfScope("infinite statement; follows formally from the chain")),
    s("phi' T-space not finitely based", "decomposition of phi'_m mod T(G) and its consequence", Claims(&["phi-prime-decomp"])),
    s("w_m central on G0", "each w_m is a central polynomial of G0 that is not an identity", Claims(&["w-central"])),
];

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub statements: usize,
    pub covered: usize,
    pub out_of_scope: usize,
    /// Catalog keys referenced by the registry that do not exist.
    pub dangling: Vec<String>,
    /// Catalog claims that no statement references.
    pub orphaned: Vec<String>,
}

impl AuditReport {
    pub fn is_total(&self) -> bool {
        self.dangling.is_empty() && self.orphaned.is_empty() && self.covered + self.out_of_scope == self.statements
    }
}

/// Checks that the registry and the catalog reference each other totally.
pub fn audit() -> AuditReport {
    let mut covered = 0;
    let mut out = 0;
    let mut dangling = Vec::new();
    let mut referenced = std::collections::BTreeSet::new();
    for st in STATEMENTS {
        match st.coverage {
            Claims(keys) => {
                covered += 1;
                for k in keys {
                    referenced.insert(*k);
                    if claim_info(k).is_none() {
                        dangling.push(k.to_string());
                    }
                }
            }
            OutOfScope(_) => out += 1,
        }
    }
    let orphaned = super::CLAIMS
        .iter()
        .filter(|c| c.kind == super::ClaimKind::Claim && !referenced.contains(c.key))
        .map(|c| c.key.to_string())
        .collect();
    AuditReport {
        statements: STATEMENTS.len(),
        covered,
        out_of_scope: out,
        dangling,
        orphaned,
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn audit_is_total() {
        let r = super::audit();
        assert!(r.is_total(), "{r:?}");
    }
}
