//! Exact spans of T-spaces and T-ideals inside one multidegree component.
//!
//! Spanning families, per atom:
//!
//! * `S2`: `[m, n]` over word pairs. The generator `[x1, x2]` is bilinear,
//!   so monomial substitutions already span every component.
//! * `T3`: the ideal generated by `[[x1, x2], x3]`. The generator is
//!   multilinear, so `a [[m1, m2], m3] b` over words spans; moreover
//!   `[[u, v], wz] = [[u, v], w] z + w [[u, v], z]` lets `m3` be a single
//!   letter.
//! * `XP_T0`: the ideal generated by `x^p`, taken multihomogeneously:
//!   `a * sym(m_1^e_1 ... m_k^e_k) * b`, where `sym` is the sum of all
//!   distinct arrangements of `e_i` copies of the distinct words `m_i`
//!   (`sum e_i = p`). These are the homogeneous parts of `u^p` for
//!   `u = sum t_i m_i`.
//! * `Instances`: the span of the listed homogeneous generators under all
//!   substitutions of variables by nonempty words. This is the span of
//!   those instances, not the full T-space the generators produce.
//!
//! Ideals are built recursively: the component `d` of an ideal `J` is
//! spanned by the generators of multidegree `d` together with `x * J_{d-x}`
//! and `J_{d-x} * x` for each variable `x`, which covers every context
//! `a g b` one letter at a time.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::builders::build_w;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Echelon, SparseVec};
use crate::polynomial::Polynomial;
use crate::word::{Mode, Multidegree, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanSpec {
    S2,
    T3,
    XpT0,
    /// `XP_T0 + T3`.
    TG0,
    Instances { label: String, generators: Vec<Polynomial> },
    Sum(Vec<SpanSpec>),
}

impl fmt::Display for SpanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpanSpec::S2 => f.write_str("S2"),
            SpanSpec::T3 => f.write_str("T3"),
            SpanSpec::XpT0 => f.write_str("XP_T0"),
            SpanSpec::TG0 => f.write_str("TG0"),
            SpanSpec::Instances { label, .. } => f.write_str(label),
            SpanSpec::Sum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                f.write_str(&s.join("+"))
            }
        }
    }
}

impl SpanSpec {
    /// Parses `S2`, `T3`, `XP_T0`, `TG0`, `W<m>` (monomial instances of
    /// `w_m`) and `+`-separated sums of these.
    pub fn parse(s: &str, field: Field) -> Result<SpanSpec> {
        let mut parts = Vec::new();
        for (i, raw) in s.split('+').enumerate() {
            let atom = raw.trim();
            let spec = match atom.to_ascii_uppercase().as_str() {
                "S2" => SpanSpec::S2,
                "T3" => SpanSpec::T3,
                "XP_T0" | "XPT0" | "XP" => SpanSpec::XpT0,
                "TG0" => SpanSpec::TG0,
                other if other.starts_with('W') && other[1..].parse::<u32>().is_ok() => {
                    let m: u32 = other[1..].parse().expect("checked");
                    SpanSpec::Instances {
                        label: format!("W{m}"),
                        generators: vec![build_w(field, Mode::Nonunital, m, None)?],
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        column: s.split('+').take(i).map(|p| p.len() + 1).sum::<usize>() + 1,
                        message: format!("unknown span atom '{atom}'"),
                    })
                }
            };
            parts.push(spec);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            SpanSpec::Sum(parts)
        })
    }

    fn collect_atoms(&self, atoms: &mut Atoms) {
        match self {
            SpanSpec::S2 => atoms.s2 = true,
            SpanSpec::T3 => atoms.t3 = true,
            SpanSpec::XpT0 => atoms.xp = true,
            SpanSpec::TG0 => {
                atoms.t3 = true;
                atoms.xp = true;
            }
            SpanSpec::Instances { generators, .. } => atoms.instances.extend(generators.iter().cloned()),
            SpanSpec::Sum(parts) => parts.iter().for_each(|p| p.collect_atoms(atoms)),
        }
    }
}

#[derive(Default)]
struct Atoms {
    s2: bool,
    t3: bool,
    xp: bool,
    instances: Vec<Polynomial>,
}

/// Caps on enumeration work; exceeding either makes the span inconclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_vectors: usize,
    pub max_entries: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_vectors: 500_000,
            max_entries: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SpanStatus {
    Exact,
    Inconclusive { exhausted: String },
}

/// All words of multidegree `d`, in canonical order.
pub fn component_words(d: &Multidegree, mode: Mode) -> Result<Vec<Word>> {
    if d.is_empty() && mode == Mode::Nonunital {
        return Err(Error::InvalidParameter(
            "the empty multidegree has no nonunital words".into(),
        ));
    }
    Ok(d.words())
}

#[derive(Debug)]
struct Component {
    words: Vec<Word>,
    index: HashMap<Word, u32>,
}

impl Component {
    fn new(d: &Multidegree) -> Self {
        let words = d.words();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Component { words, index }
    }

    fn empty() -> Self {
        Component {
            words: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn col(&self, w: &Word) -> u32 {
        self.index[w]
    }

    fn vector(&self, field: Field, terms: impl IntoIterator<Item = (Word, u32)>) -> SparseVec {
        let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
        for (w, c) in terms {
            let e = acc.entry(self.col(&w)).or_insert(0);
            *e = field.add(*e, c % field.p());
        }
        acc.into_iter().filter(|&(_, c)| c != 0).collect()
    }
}

#[derive(Debug)]
struct IdealPart {
    comp: Rc<Component>,
    echelon: Echelon,
}

/// An echelonized span inside one component.
#[derive(Debug, Clone)]
pub struct ComponentSpan {
    spec: String,
    field: Field,
    multidegree: Multidegree,
    comp: Rc<Component>,
    echelon: Echelon,
    status: SpanStatus,
    vectors: usize,
    budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Coordinates over the span rows, keyed by pivot word.
    Member { combination: Vec<(Word, u32)> },
    /// Nonzero residual after reduction by an exhaustive span.
    NotMember { residual: Vec<(Word, u32)> },
    /// Not in the partial span of an inconclusive build.
    Unknown { residual: Vec<(Word, u32)> },
}

impl Membership {
    pub fn verdict(&self) -> &'static str {
        match self {
            Membership::Member { .. } => "member",
            Membership::NotMember { .. } => "not_member",
            Membership::Unknown { .. } => "unknown",
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn is_not_member(&self) -> bool {
        matches!(self, Membership::NotMember { .. })
    }
}

fn terms_json(field: Field, terms: &[(Word, u32)]) -> serde_json::Value {
    let p = Polynomial::from_terms(field, Mode::Unital, terms.iter().cloned()).expect("unital accepts all");
    serde_json::Value::String(p.to_string())
}

impl ComponentSpan {
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn multidegree(&self) -> &Multidegree {
        &self.multidegree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dimension(&self) -> usize {
        self.echelon.rank()
    }

    pub fn status(&self) -> &SpanStatus {
        &self.status
    }

    pub fn is_exact(&self) -> bool {
        self.status == SpanStatus::Exact
    }

    pub fn words(&self) -> &[Word] {
        &self.comp.words
    }

    pub fn vectors_used(&self) -> usize {
        self.vectors
    }

    pub fn pivot_words(&self) -> Vec<Word> {
        self.echelon
            .pivots()
            .into_iter()
            .map(|c| self.comp.words[c as usize].clone())
            .collect()
    }

    /// Span rows as polynomials, ordered by pivot.
    pub fn basis(&self) -> Vec<Polynomial> {
        self.echelon
            .rows()
            .into_iter()
            .map(|r| self.poly_of(r))
            .collect()
    }

    fn poly_of(&self, v: &[(u32, u32)]) -> Polynomial {
        Polynomial::from_terms(
            self.field,
            Mode::Nonunital,
            v.iter().map(|&(c, a)| (self.comp.words[c as usize].clone(), a)),
        )
        .expect("component words are nonempty")
    }

    pub fn vector_of(&self, f: &Polynomial) -> Result<SparseVec> {
        if f.field() != self.field {
            return Err(Error::FieldMismatch(f.field().p(), self.field.p()));
        }
        let mut v = Vec::with_capacity(f.len());
        for (w, c) in f.terms() {
            match self.comp.index.get(w) {
                Some(&col) => v.push((col, c)),
                None => return Err(Error::ComponentMismatch(self.multidegree.to_string())),
            }
        }
        v.sort_unstable();
        Ok(v)
    }

    /// Decides whether the homogeneous polynomial `f` lies in the span.
    pub fn member(&self, f: &Polynomial) -> Result<Membership> {
        if self.comp.words.is_empty() {
            // never enumerated: too large for the budget
            if f.terms().any(|(w, _)| w.multidegree() != self.multidegree) {
                return Err(Error::ComponentMismatch(self.multidegree.to_string()));
            }
            return Ok(Membership::Unknown {
                residual: f.terms().map(|(w, c)| (w.clone(), c)).collect(),
            });
        }
        let v = self.vector_of(f)?;
        let residual = self.echelon.residual(&v);
        let words = |v: &[(u32, u32)]| -> Vec<(Word, u32)> {
            v.iter()
                .map(|&(c, a)| (self.comp.words[c as usize].clone(), a))
                .collect()
        };
        Ok(if residual.is_empty() {
            Membership::Member {
                combination: words(&self.echelon.combination(&v)),
            }
        } else if self.is_exact() {
            Membership::NotMember {
                residual: words(&residual),
            }
        } else {
            Membership::Unknown {
                residual: words(&residual),
            }
        })
    }

    pub fn certificate(&self, query: &Polynomial, result: &Membership, seed: Option<u64>) -> serde_json::Value {
        let mut cert = serde_json::json!({
            "spec": self.spec,
            "multidegree": self.multidegree,
            "p": self.field.p(),
            "status": self.status,
            "dimension": self.dimension(),
            "words": self.comp.words.len(),
            "pivots": self.echelon.pivots(),
            "query": query.to_string(),
            "verdict": result.verdict(),
            "seed": seed,
            "budget": self.budget,
        });
        match result {
            Membership::Member { combination } => {
                cert["combination"] = terms_json(self.field, combination);
            }
            Membership::NotMember { residual } | Membership::Unknown { residual } => {
                cert["residual"] = terms_json(self.field, residual);
            }
        }
        cert
    }
}

/// Builds spans and caches them, along with the ideal sub-components they
/// are assembled from.
pub struct SpanEngine {
    field: Field,
    budget: Budget,
    ideals: HashMap<(bool, bool, Multidegree), Rc<IdealPart>>,
    spans: HashMap<(String, Multidegree), Rc<ComponentSpan>>,
    components: HashMap<Multidegree, Rc<Component>>,
}

struct Counter {
    vectors: usize,
    budget: Budget,
    exhausted: Option<String>,
}

impl Counter {
    /// Refuses components whose word count alone rules out finishing: the
    /// echelon needs a row per word for near-full spans, and the spanning
    /// family has on the order of (words x degree) vectors.
    fn check_size(&mut self, d: &Multidegree) {
        if self.exhausted.is_some() {
            return;
        }
        let words = d.word_count();
        if words > self.budget.max_entries as u128 {
            self.exhausted = Some(format!("component {d} has {words} words > {} entries", self.budget.max_entries));
        } else if words * d.total() as u128 > self.budget.max_vectors as u128 {
            self.exhausted = Some(format!(
                "component {d}: {words} words x degree {} > {} vectors",
                d.total(),
                self.budget.max_vectors
            ));
        }
    }

    fn insert(&mut self, e: &mut Echelon, v: &[(u32, u32)]) -> bool {
        if self.exhausted.is_some() {
            return false;
        }
        if v.is_empty() {
            return true;
        }
        self.vectors += 1;
        if self.vectors > self.budget.max_vectors {
            self.exhausted = Some(format!("spanning vectors > {}", self.budget.max_vectors));
            return false;
        }
        e.insert(v);
        if e.entries() > self.budget.max_entries {
            self.exhausted = Some(format!("matrix entries > {}", self.budget.max_entries));
            return false;
        }
        true
    }
}

fn commutator_terms(a: &[u32], b: &[u32]) -> [(Vec<u32>, bool); 2] {
    let ab: Vec<u32> = a.iter().chain(b).copied().collect();
    let ba: Vec<u32> = b.iter().chain(a).copied().collect();
    [(ab, false), (ba, true)]
}

impl SpanEngine {
    pub fn new(field: Field, budget: Budget) -> Self {
        SpanEngine {
            field,
            budget,
            ideals: HashMap::new(),
            spans: HashMap::new(),
            components: HashMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    fn component(&mut self, d: &Multidegree) -> Rc<Component> {
        self.components
            .entry(d.clone())
            .or_insert_with(|| Rc::new(Component::new(d)))
            .clone()
    }

    /// The span of `spec` inside component `d`.
    pub fn span(&mut self, spec: &SpanSpec, d: &Multidegree) -> Result<Rc<ComponentSpan>> {
        component_words(d, Mode::Nonunital)?;
        let key = (spec.to_string(), d.clone());
        if let Some(s) = self.spans.get(&key) {
            return Ok(s.clone());
        }
        let mut atoms = Atoms::default();
        spec.collect_atoms(&mut atoms);
        let mut counter = Counter {
            vectors: 0,
            budget: self.budget,
            exhausted: None,
        };
        counter.check_size(d);
        let comp = if counter.exhausted.is_some() {
            Rc::new(Component::empty())
        } else {
            self.component(d)
        };
        let mut echelon = Echelon::new(self.field, comp.words.len());
        if atoms.t3 || atoms.xp {
            let part = self.ideal(atoms.t3, atoms.xp, d, &mut counter);
            for row in part.echelon.rows() {
                counter.insert(&mut echelon, row);
            }
        }
        if atoms.s2 {
            s2_generators(self.field, &comp, &mut |v| counter.insert(&mut echelon, &v));
        }
        for g in &atoms.instances {
            for v in instance_generators(self.field, &comp, d, g)? {
                if !counter.insert(&mut echelon, &v) {
                    break;
                }
            }
        }
        echelon.reduce();
        let status = match counter.exhausted {
            None => SpanStatus::Exact,
            Some(why) => SpanStatus::Inconclusive { exhausted: why },
        };
        let span = Rc::new(ComponentSpan {
            spec: spec.to_string(),
            field: self.field,
            multidegree: d.clone(),
            comp,
            echelon,
            status,
            vectors: counter.vectors,
            budget: self.budget,
        });
        self.spans.insert(key, span.clone());
        Ok(span)
    }

    fn ideal(&mut self, t3: bool, xp: bool, d: &Multidegree, counter: &mut Counter) -> Rc<IdealPart> {
        let key = (t3, xp, d.clone());
        if let Some(part) = self.ideals.get(&key) {
            return part.clone();
        }
        counter.check_size(d);
        if counter.exhausted.is_some() {
            let comp = Rc::new(Component::empty());
            let echelon = Echelon::new(self.field, 0);
            return Rc::new(IdealPart { comp, echelon });
        }
        let comp = self.component(d);
        let mut echelon = Echelon::new(self.field, comp.words.len());
        let p = self.field.p() as usize;
        let min_degree = match (t3, xp) {
            (true, true) => 3.min(p),
            (true, false) => 3,
            _ => p,
        };
        if d.total() as usize >= min_degree {
            let vars: Vec<u32> = d.variables().collect();
            for x in vars {
                let sub_d = d.minus_var(x).expect("variable occurs");
                if sub_d.is_empty() {
                    continue;
                }
                let sub = self.ideal(t3, xp, &sub_d, counter);
                for row in sub.echelon.rows() {
                    let mut left = Vec::with_capacity(row.len());
                    let mut right = Vec::with_capacity(row.len());
                    for &(c, a) in row {
                        let w = sub.comp.words[c as usize].letters();
                        let mut l = Vec::with_capacity(w.len() + 1);
                        l.push(x);
                        l.extend_from_slice(w);
                        left.push((comp.col(&Word::new(l)), a));
                        let mut r = w.to_vec();
                        r.push(x);
                        right.push((comp.col(&Word::new(r)), a));
                    }
                    left.sort_unstable();
                    right.sort_unstable();
                    counter.insert(&mut echelon, &left);
                    counter.insert(&mut echelon, &right);
                }
            }
            if t3 {
                t3_generators(self.field, &comp, &mut |v| counter.insert(&mut echelon, &v));
            }
            if xp {
                for v in xp_generators(self.field, &comp, d) {
                    if !counter.insert(&mut echelon, &v) {
                        break;
                    }
                }
            }
        }
        echelon.reduce();
        let part = Rc::new(IdealPart { comp, echelon });
        // partial results are not cached
        if counter.exhausted.is_none() {
            self.ideals.insert(key, part.clone());
        }
        part
    }

    /// Splits `f` into multihomogeneous components and decides membership of
    /// each in `spec`.
    pub fn member_poly(&mut self, f: &Polynomial, spec: &SpanSpec) -> Result<PolyMembership> {
        let mut parts = Vec::new();
        let mut constant = None;
        for (d, comp) in f.components() {
            if d.is_empty() {
                // none of the atoms contain constants
                constant = Some(comp.constant_term());
                continue;
            }
            let g = comp.with_mode(Mode::Nonunital)?;
            let span = self.span(spec, &d)?;
            let m = span.member(&g)?;
            parts.push(ComponentResult { span, query: g, result: m });
        }
        Ok(PolyMembership { parts, constant })
    }
}

pub struct ComponentResult {
    pub span: Rc<ComponentSpan>,
    pub query: Polynomial,
    pub result: Membership,
}

/// Per-component membership of a possibly inhomogeneous polynomial.
pub struct PolyMembership {
    pub parts: Vec<ComponentResult>,
    /// A nonzero constant term, which is never a member.
    pub constant: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Member,
    NotMember,
    Unknown,
}

impl PolyMembership {
    pub fn verdict(&self) -> Verdict {
        if self.constant.is_some() || self.parts.iter().any(|c| c.result.is_not_member()) {
            Verdict::NotMember
        } else if self.parts.iter().all(|c| c.result.is_member()) {
            Verdict::Member
        } else {
            Verdict::Unknown
        }
    }

    pub fn certificates(&self, seed: Option<u64>) -> Vec<serde_json::Value> {
        self.parts
            .iter()
            .map(|c| c.span.certificate(&c.query, &c.result, seed))
            .collect()
    }

    /// The first failing component's residual, as a polynomial string.
    pub fn first_residual(&self) -> Option<String> {
        if let Some(c) = self.constant {
            return Some(c.to_string());
        }
        self.parts.iter().find_map(|c| match &c.result {
            Membership::NotMember { residual } | Membership::Unknown { residual } => {
                Some(terms_json(c.span.field(), residual).as_str().unwrap_or_default().to_string())
            }
            Membership::Member { .. } => None,
        })
    }
}

fn s2_generators(field: Field, comp: &Component, emit: &mut dyn FnMut(SparseVec) -> bool) {
    for w in &comp.words {
        let l = w.letters();
        for k in 1..l.len() {
            let [(ab, _), (ba, _)] = commutator_terms(&l[..k], &l[k..]);
            // [b, a] = -[a, b] comes from the word ba
            if ab >= ba {
                continue;
            }
            let v = comp.vector(field, [(Word::new(ab), 1), (Word::new(ba), field.neg(1))]);
            if !emit(v) {
                return;
            }
        }
    }
}

/// `[[m1, m2], x]` for every word `m1 m2 x` of the component with `m1 < m2`.
fn t3_generators(field: Field, comp: &Component, emit: &mut dyn FnMut(SparseVec) -> bool) {
    for w in &comp.words {
        let l = w.letters();
        let n = l.len();
        if n < 3 {
            continue;
        }
        let x = l[n - 1];
        for k in 1..n - 1 {
            let (m1, m2) = (&l[..k], &l[k..n - 1]);
            if Word::new(m1.to_vec()) >= Word::new(m2.to_vec()) {
                continue;
            }
            let mut terms = Vec::with_capacity(4);
            for (inner, neg) in commutator_terms(m1, m2) {
                let mut right = inner.clone();
                right.push(x);
                let mut left = vec![x];
                left.extend_from_slice(&inner);
                let c = if neg { field.neg(1) } else { 1 };
                terms.push((Word::new(right), c));
                terms.push((Word::new(left), field.neg(c)));
            }
            let v = comp.vector(field, terms);
            if !v.is_empty() && !emit(v) {
                return;
            }
        }
    }
}

/// Symmetrized `p`-th powers of multisets of distinct words, multidegree `d`.
fn xp_generators(field: Field, comp: &Component, d: &Multidegree) -> Vec<SparseVec> {
    let p = field.p();
    let vars: Vec<u32> = d.variables().collect();
    let dense = |m: &Multidegree| -> Vec<u32> { vars.iter().map(|&v| m.get(v)).collect() };
    let target = dense(d);
    let mut pool: Vec<(Word, Vec<u32>)> = Vec::new();
    for c in d.sub_degrees() {
        if c.is_empty() {
            continue;
        }
        let dc = dense(&c);
        for w in c.words() {
            pool.push((w, dc.clone()));
        }
    }
    pool.sort_by(|a, b| a.0.cmp(&b.0));

    struct Search<'a> {
        pool: &'a [(Word, Vec<u32>)],
        chosen: Vec<(usize, u32)>,
        out: Vec<Vec<(usize, u32)>>,
    }
    fn rec(s: &mut Search<'_>, start: usize, remaining: &mut Vec<u32>, slots: u32) {
        let left: u32 = remaining.iter().sum();
        if slots == 0 {
            if left == 0 {
                s.out.push(s.chosen.clone());
            }
            return;
        }
        if left < slots {
            return;
        }
        for idx in start..s.pool.len() {
            let deg = s.pool[idx].0.len() as u32;
            if deg > left {
                break;
            }
            let md = &s.pool[idx].1;
            for e in 1..=slots {
                if md.iter().zip(remaining.iter()).any(|(a, r)| a * e > *r) {
                    break;
                }
                for (r, a) in remaining.iter_mut().zip(md) {
                    *r -= a * e;
                }
                s.chosen.push((idx, e));
                rec(s, idx + 1, remaining, slots - e);
                s.chosen.pop();
                for (r, a) in remaining.iter_mut().zip(md) {
                    *r += a * e;
                }
            }
        }
    }
    let mut search = Search {
        pool: &pool,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    let mut remaining = target;
    rec(&mut search, 0, &mut remaining, p);

    let mut out = Vec::new();
    for multiset in search.out {
        let mut counts: Vec<u32> = multiset.iter().map(|&(_, e)| e).collect();
        let mut seq = Vec::with_capacity(p as usize);
        let mut terms: Vec<(Word, u32)> = Vec::new();
        fn arrange(
            pool: &[(Word, Vec<u32>)],
            multiset: &[(usize, u32)],
            counts: &mut [u32],
            seq: &mut Vec<usize>,
            len: usize,
            terms: &mut Vec<(Word, u32)>,
        ) {
            if seq.len() == len {
                let mut letters = Vec::new();
                for &i in seq.iter() {
                    letters.extend_from_slice(pool[multiset[i].0].0.letters());
                }
                terms.push((Word::new(letters), 1));
                return;
            }
            for i in 0..counts.len() {
                if counts[i] > 0 {
                    counts[i] -= 1;
                    seq.push(i);
                    arrange(pool, multiset, counts, seq, len, terms);
                    seq.pop();
                    counts[i] += 1;
                }
            }
        }
        arrange(&pool, &multiset, &mut counts, &mut seq, p as usize, &mut terms);
        let v = comp.vector(field, terms);
        if !v.is_empty() {
            out.push(v);
        }
    }
    out
}

/// `g(m_1, ..., m_k)` for words `m_i` landing in multidegree `d`.
fn instance_generators(field: Field, comp: &Component, d: &Multidegree, g: &Polynomial) -> Result<Vec<SparseVec>> {
    if g.is_zero() {
        return Ok(Vec::new());
    }
    if !g.is_homogeneous() || g.constant_term() != 0 {
        return Err(Error::InvalidParameter(
            "instance generators must be homogeneous without constant term".into(),
        ));
    }
    let g = g.with_mode(Mode::Nonunital)?;
    let gd = g.terms().next().expect("nonzero").0.multidegree();
    let gvars: Vec<(u32, u32)> = gd.iter().collect();
    let pool: Vec<(Word, Multidegree)> = d
        .sub_degrees()
        .into_iter()
        .filter(|c| !c.is_empty())
        .flat_map(|c| c.words().into_iter().map(move |w| (w, c.clone())))
        .collect();
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        field: Field,
        comp: &Component,
        g: &Polynomial,
        gvars: &[(u32, u32)],
        pool: &[(Word, Multidegree)],
        remaining: &Multidegree,
        chosen: &mut BTreeMap<u32, Polynomial>,
        out: &mut Vec<SparseVec>,
    ) -> Result<()> {
        let Some(&(v, k)) = gvars.first() else {
            if remaining.is_empty() {
                let img = g.substitute(chosen)?;
                let vec = comp.vector(field, img.terms().map(|(w, c)| (w.clone(), c)));
                if !vec.is_empty() {
                    out.push(vec);
                }
            }
            return Ok(());
        };
        for (w, c) in pool {
            if let Some(rest) = remaining.checked_sub(&c.scaled(k)) {
                chosen.insert(v, Polynomial::monomial(field, Mode::Nonunital, w.clone(), 1)?);
                rec(field, comp, g, &gvars[1..], pool, &rest, chosen, out)?;
                chosen.remove(&v);
            }
        }
        Ok(())
    }
    rec(field, comp, &g, &gvars, &pool, d, &mut BTreeMap::new(), &mut out)?;
    Ok(out)
}

/// One-shot [`SpanEngine::span`].
pub fn build_span(spec: &SpanSpec, d: &Multidegree, field: Field, budget: Budget) -> Result<ComponentSpan> {
    let mut engine = SpanEngine::new(field, budget);
    let span = engine.span(spec, d)?;
    drop(engine);
    Ok(Rc::try_unwrap(span).unwrap_or_else(|rc| (*rc).clone()))
}

/// One-shot membership of a homogeneous `f` in `spec` at `f`'s multidegree.
pub fn member(f: &Polynomial, span: &ComponentSpan) -> Result<Membership> {
    span.member(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::new(3).unwrap()
    }

    fn x(i: u32) -> Polynomial {
        Polynomial::var(f3(), Mode::Nonunital, i)
    }

    #[test]
    fn s2_in_degree_two() {
        let s = build_span(&SpanSpec::S2, &Multidegree::from_degrees(&[1, 1]), f3(), Budget::default()).unwrap();
        assert_eq!(s.dimension(), 1);
        assert_eq!(s.basis()[0], x(1).commutator(&x(2)).unwrap());
    }

    #[test]
    fn t3_multilinear_degree_three() {
        let s = build_span(&SpanSpec::T3, &Multidegree::from_degrees(&[1, 1, 1]), f3(), Budget::default()).unwrap();
        assert_eq!(s.dimension(), 2);
        assert!(s.is_exact());
    }

    #[test]
    fn cube_is_in_tg0() {
        let s = build_span(&SpanSpec::TG0, &Multidegree::from_degrees(&[3]), f3(), Budget::default()).unwrap();
        assert!(s.member(&x(1).pow(3).unwrap()).unwrap().is_member());
    }

    #[test]
    fn commutator_instance_in_s2() {
        let f = x(1).commutator(&x(2).pow(2).unwrap()).unwrap();
        let s = build_span(&SpanSpec::S2, &Multidegree::from_degrees(&[1, 2]), f3(), Budget::default()).unwrap();
        assert!(s.member(&f).unwrap().is_member());
    }

    #[test]
    fn component_mismatch() {
        let s = build_span(&SpanSpec::S2, &Multidegree::from_degrees(&[1, 1]), f3(), Budget::default()).unwrap();
        assert!(matches!(s.member(&x(1)), Err(Error::ComponentMismatch(_))));
        assert!(component_words(&Multidegree::new(), Mode::Nonunital).is_err());
    }

    #[test]
    fn parse_specs() {
        let s = SpanSpec::parse("S2+TG0", f3()).unwrap();
        assert_eq!(s, SpanSpec::Sum(vec![SpanSpec::S2, SpanSpec::TG0]));
        assert_eq!(s.to_string(), "S2+TG0");
        assert!(SpanSpec::parse("S2+Q", f3()).is_err());
        assert_eq!(SpanSpec::parse("W1", f3()).unwrap().to_string(), "W1");
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let budget = Budget { max_vectors: 3, max_entries: 1_000_000 };
        let s = build_span(&SpanSpec::T3, &Multidegree::from_degrees(&[1, 1, 1, 1]), f3(), budget).unwrap();
        assert!(!s.is_exact());
        let far = &(&x(1) * &x(2)) * &(&x(3) * &x(4));
        assert!(matches!(s.member(&far).unwrap(), Membership::Unknown { .. }));
    }

    #[test]
    fn w1_instances() {
        let s = SpanSpec::parse("W1", f3()).unwrap();
        let span = build_span(&s, &Multidegree::from_degrees(&[3, 3]), f3(), Budget::default()).unwrap();
        // w1(x1,x2) and w1(x2,x1)
        assert_eq!(span.dimension(), 2);
    }
}
