//! Finite Grassmann algebras `G(N)` and `G0(N)` over GF(p).
//!
//! A blade `e_{i1} ... e_{ik}` (i1 < ... < ik) is stored as a bitmask with
//! bit `i - 1` set for each generator `e_i`; at most 63 generators.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::polynomial::Polynomial;
use crate::word::Mode;

pub type Blade = u64;

pub const MAX_GENERATORS: u32 = 63;

/// Product of two blades: `None` if they share a generator, otherwise the
/// sign (`true` = negative) and the union blade.
///
/// The sign is the parity of the number of pairs `(i in a, j in b)` with
/// `i > j`, i.e. the transpositions needed to sort the concatenation.
#[inline]
pub fn blade_product(a: Blade, b: Blade) -> Option<(bool, Blade)> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> j).count_ones();
    }
    Some((inversions & 1 == 1, a | b))
}

pub fn blade_grade(b: Blade) -> u32 {
    b.count_ones()
}

/// Blade from 1-based generator indices in any order, with the sign of the
/// reordering. `None` if an index repeats.
pub fn blade_from_indices(indices: &[u32]) -> Option<(bool, Blade)> {
    let mut acc: (bool, Blade) = (false, 0);
    for &i in indices {
        let (s, b) = blade_product(acc.1, 1u64 << (i - 1))?;
        acc = (acc.0 ^ s, b);
    }
    Some(acc)
}

pub fn format_blade(b: Blade) -> String {
    if b == 0 {
        return "1".into();
    }
    let mut s = String::new();
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros() + 1;
        rest &= rest - 1;
        s.push_str(&format!("e{i}"));
    }
    s
}

/// Configuration of `G(N)` (unital) or `G0(N)` (nonunital).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannAlgebra {
    pub field: Field,
    pub n: u32,
    pub mode: Mode,
}

impl GrassmannAlgebra {
    pub fn new(field: Field, n: u32, mode: Mode) -> Result<Self> {
        if n == 0 || n > MAX_GENERATORS {
            return Err(Error::InvalidParameter(format!(
                "number of generators must be in 1..={MAX_GENERATORS}, got {n}"
            )));
        }
        Ok(GrassmannAlgebra { field, n, mode })
    }

    pub fn dimension(&self) -> u128 {
        let full = 1u128 << self.n;
        match self.mode {
            Mode::Unital => full,
            Mode::Nonunital => full - 1,
        }
    }

    fn full_mask(&self) -> Blade {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn check_blade(&self, b: Blade) -> Result<()> {
        let extra = b & !self.full_mask();
        if extra != 0 {
            return Err(Error::BladeOutOfRange {
                index: extra.trailing_zeros() + 1,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Range-checked [`blade_product`].
    pub fn blade_mul(&self, a: Blade, b: Blade) -> Result<Option<(bool, Blade)>> {
        self.check_blade(a)?;
        self.check_blade(b)?;
        Ok(blade_product(a, b))
    }

    pub fn zero(&self) -> GrassmannElement {
        GrassmannElement {
            alg: *self,
            blades: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> Result<GrassmannElement> {
        if self.mode == Mode::Nonunital {
            return Err(Error::ConstantInNonunital);
        }
        self.element([(0, 1)])
    }

    pub fn scalar(&self, c: u32) -> Result<GrassmannElement> {
        if self.mode == Mode::Nonunital && !c.is_multiple_of(self.field.p()) {
            return Err(Error::ConstantInNonunital);
        }
        self.element([(0, c)])
    }

    /// The generator `e_i` (1-based).
    pub fn generator(&self, i: u32) -> Result<GrassmannElement> {
        if i == 0 || i > self.n {
            return Err(Error::BladeOutOfRange { index: i, n: self.n });
        }
        self.element([(1u64 << (i - 1), 1)])
    }

    pub fn blade(&self, b: Blade) -> Result<GrassmannElement> {
        self.element([(b, 1)])
    }

    pub fn element(&self, terms: impl IntoIterator<Item = (Blade, u32)>) -> Result<GrassmannElement> {
        let mut e = self.zero();
        for (b, c) in terms {
            self.check_blade(b)?;
            if b == 0 && self.mode == Mode::Nonunital && c % self.field.p() != 0 {
                return Err(Error::ConstantInNonunital);
            }
            e.add_term(b, c);
        }
        Ok(e)
    }

    /// The product `e_1 e_2 ... e_N`.
    pub fn top_blade(&self) -> Blade {
        self.full_mask()
    }

    /// Homomorphic image of `f` under `x_v -> assignment[v]`.
    pub fn evaluate(
        &self,
        f: &Polynomial,
        assignment: &BTreeMap<u32, GrassmannElement>,
    ) -> Result<GrassmannElement> {
        if f.field() != self.field {
            return Err(Error::FieldMismatch(f.field().p(), self.field.p()));
        }
        if f.mode() == Mode::Unital && self.mode == Mode::Nonunital && f.constant_term() != 0 {
            return Err(Error::ConstantInNonunital);
        }
        for v in f.variables() {
            match assignment.get(&v) {
                None => return Err(Error::UnassignedVariable(v)),
                Some(e) if e.alg != *self => {
                    return Err(Error::InvalidParameter(format!(
                        "value of x{v} lives in a different Grassmann algebra"
                    )))
                }
                Some(_) => {}
            }
        }
        let mut out = self.zero();
        // Memoised prefix products: terms come in deglex order, so consecutive
        // words often share prefixes.
        let mut stack: Vec<(u32, GrassmannElement)> = Vec::new();
        for (w, c) in f.terms() {
            let letters = w.letters();
            let mut common = 0;
            while common < stack.len() && common < letters.len() && stack[common].0 == letters[common] {
                common += 1;
            }
            stack.truncate(common);
            for &x in &letters[common..] {
                let next = match stack.last() {
                    None => assignment[&x].clone(),
                    Some((_, prev)) => prev.mul(&assignment[&x]),
                };
                stack.push((x, next));
            }
            match stack.last() {
                None => out.add_term(0, c),
                Some((_, v)) => {
                    for (&b, &a) in &v.blades {
                        out.add_term(b, self.field.mul(a, c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// A random element: optional scalar part (unital mode), plus up to
    /// `max_blades` random blades of grade at most `max_grade`.
    pub fn random_element<R: Rng>(&self, rng: &mut R, max_blades: usize, max_grade: u32) -> GrassmannElement {
        let mut e = self.zero();
        if self.mode == Mode::Unital && rng.gen_bool(0.5) {
            e.add_term(0, rng.gen_range(0..self.field.p()));
        }
        let k = rng.gen_range(1..=max_blades.max(1));
        for _ in 0..k {
            let grade = rng.gen_range(1..=max_grade.min(self.n).max(1));
            let mut b: Blade = 0;
            while b.count_ones() < grade {
                b |= 1u64 << rng.gen_range(0..self.n);
            }
            e.add_term(b, rng.gen_range(1..self.field.p()));
        }
        e
    }
}

/// A sparse GF(p)-combination of blades.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrassmannElement {
    alg: GrassmannAlgebra,
    blades: BTreeMap<Blade, u32>,
}

impl GrassmannElement {
    pub fn algebra(&self) -> GrassmannAlgebra {
        self.alg
    }

    fn add_term(&mut self, b: Blade, c: u32) {
        let f = self.alg.field;
        let c = c % f.p();
        if c == 0 {
            return;
        }
        let e = self.blades.entry(b).or_insert(0);
        *e = f.add(*e, c);
        if *e == 0 {
            self.blades.remove(&b);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blades.is_empty()
    }

    pub fn coeff(&self, b: Blade) -> u32 {
        self.blades.get(&b).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, u32)> + '_ {
        self.blades.iter().map(|(&b, &c)| (b, c))
    }

    pub fn len(&self) -> usize {
        self.blades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blades.is_empty()
    }

    pub fn add(&self, other: &GrassmannElement) -> GrassmannElement {
        let mut out = self.clone();
        for (&b, &c) in &other.blades {
            out.add_term(b, c);
        }
        out
    }

    pub fn sub(&self, other: &GrassmannElement) -> GrassmannElement {
        self.add(&other.scale(self.alg.field.neg(1)))
    }

    pub fn scale(&self, c: u32) -> GrassmannElement {
        let mut out = self.alg.zero();
        for (&b, &a) in &self.blades {
            out.add_term(b, self.alg.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &GrassmannElement) -> GrassmannElement {
        let f = self.alg.field;
        let mut acc: BTreeMap<Blade, u32> = BTreeMap::new();
        for (&a, &ca) in &self.blades {
            for (&b, &cb) in &other.blades {
                if let Some((neg, ab)) = blade_product(a, b) {
                    let mut c = f.mul(ca, cb);
                    if neg {
                        c = f.neg(c);
                    }
                    let e = acc.entry(ab).or_insert(0);
                    *e = f.add(*e, c);
                }
            }
        }
        acc.retain(|_, c| *c != 0);
        GrassmannElement {
            alg: self.alg,
            blades: acc,
        }
    }

    pub fn commutator(&self, other: &GrassmannElement) -> GrassmannElement {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, n: u64) -> GrassmannElement {
        let mut acc = GrassmannElement {
            alg: self.alg,
            blades: BTreeMap::from([(0, 1)]),
        };
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Central iff it commutes with every generator.
    pub fn is_central(&self) -> bool {
        (1..=self.alg.n).all(|i| {
            let e = self.alg.generator(i).expect("in range");
            self.commutator(&e).is_zero()
        })
    }

    /// Parses `2*e1e2 + e3e4 - 1` in this algebra.
    pub fn parse(alg: GrassmannAlgebra, s: &str) -> Result<GrassmannElement> {
        let err = |column: usize, message: &str| Error::Parse {
            line: 1,
            column,
            message: message.into(),
        };
        let compact: Vec<(usize, char)> = s
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        if compact.is_empty() {
            return Err(err(1, "empty element"));
        }
        let mut out = alg.zero();
        let mut i = 0;
        while i < compact.len() {
            let mut negative = false;
            if compact[i].1 == '+' || compact[i].1 == '-' {
                negative = compact[i].1 == '-';
                i += 1;
            } else if i > 0 {
                return Err(err(compact[i].0 + 1, "expected '+' or '-'"));
            }
            let start = i;
            let mut coeff: Option<u64> = None;
            let mut num = String::new();
            while i < compact.len() && compact[i].1.is_ascii_digit() {
                num.push(compact[i].1);
                i += 1;
            }
            if !num.is_empty() {
                coeff = Some(num.parse::<u64>().map_err(|_| err(compact[start].0 + 1, "bad integer"))?);
                if i < compact.len() && compact[i].1 == '*' {
                    i += 1;
                } else {
                    // bare scalar
                    let c = alg.field.reduce(coeff.unwrap());
                    let c = if negative { alg.field.neg(c) } else { c };
                    if alg.mode == Mode::Nonunital && c != 0 {
                        return Err(err(compact[start].0 + 1, "scalar term in nonunital Grassmann algebra"));
                    }
                    out.add_term(0, c);
                    continue;
                }
            }
            let mut indices = Vec::new();
            while i < compact.len() && compact[i].1 == 'e' {
                let col = compact[i].0 + 1;
                i += 1;
                let mut d = String::new();
                while i < compact.len() && compact[i].1.is_ascii_digit() {
                    d.push(compact[i].1);
                    i += 1;
                }
                let idx: u32 = d.parse().map_err(|_| err(col, "expected generator index"))?;
                if idx == 0 || idx > alg.n {
                    return Err(err(col, &format!("generator e{idx} out of range 1..={}", alg.n)));
                }
                indices.push(idx);
            }
            if indices.is_empty() {
                let col = compact.get(i).map(|c| c.0 + 1).unwrap_or(s.len() + 1);
                return Err(err(col, "expected a blade like e1e2"));
            }
            let c = alg.field.reduce(coeff.unwrap_or(1));
            if let Some((neg, b)) = blade_from_indices(&indices) {
                let c = if neg ^ negative { alg.field.neg(c) } else { c };
                out.add_term(b, c);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GrassmannElement {
    /// `2*e1e2 + e3e4`; coefficients printed as residues in `0..p`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blades.is_empty() {
            return f.write_str("0");
        }
        for (i, (&b, &c)) in self.blades.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if b == 0 {
                write!(f, "{c}")?;
            } else if c == 1 {
                f.write_str(&format_blade(b))?;
            } else {
                write!(f, "{c}*{}", format_blade(b))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessMode {
    /// Look for an assignment where `f` evaluates to a nonzero element.
    Nonzero,
    /// Look for an assignment where `f` evaluates to a non-central element.
    Noncentral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: BTreeMap<u32, GrassmannElement>,
    pub value: GrassmannElement,
    pub n: u32,
    pub seed: u64,
    /// `None` for the structured family, otherwise the random sample index.
    pub sample: Option<usize>,
}

impl Witness {
    /// Variable -> element string map.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .assignment
            .iter()
            .map(|(v, e)| (format!("x{v}"), serde_json::Value::String(e.to_string())))
            .collect();
        serde_json::json!({
            "assignment": map,
            "value": self.value.to_string(),
            "n": self.n,
            "seed": self.seed,
            "sample": self.sample,
        })
    }
}

fn hits(value: &GrassmannElement, mode: WitnessMode) -> bool {
    match mode {
        WitnessMode::Nonzero => !value.is_zero(),
        WitnessMode::Noncentral => !value.is_central(),
    }
}

/// Structured assignments tried before random sampling. Each variable gets
/// an optional odd generator plus some even 2-blades, all on fresh
/// generators. `kappa(x, y)` needs `x^(p-1) != 0` next to the odd part of
/// `[x, y]`, which takes `p - 1` commuting even blades per variable, so the
/// shapes start there and shrink.
fn structured_assignments(alg: &GrassmannAlgebra, vars: &[u32]) -> Vec<BTreeMap<u32, GrassmannElement>> {
    let p = alg.field.p();
    // (has odd part, number of even 2-blades)
    let mut shapes: Vec<(bool, u32)> = (0..p).rev().map(|e| (true, e)).collect();
    shapes.extend((1..p).rev().map(|e| (false, e)));
    let mut out = Vec::new();
    for (odd, evens) in shapes {
        let per = odd as u32 + 2 * evens;
        if per == 0 || per as usize * vars.len() > alg.n as usize {
            continue;
        }
        let mut next = 1u32;
        let mut asg = BTreeMap::new();
        for &v in vars {
            let mut e = alg.zero();
            if odd {
                e.add_term(1u64 << (next - 1), 1);
                next += 1;
            }
            for _ in 0..evens {
                e.add_term((1u64 << (next - 1)) | (1u64 << next), 1);
                next += 2;
            }
            asg.insert(v, e);
        }
        out.push(asg);
    }
    out
}

/// Searches for an assignment of the variables of `f` into `alg` on which
/// `f` is nonzero (or non-central). Structured assignments come first, then
/// `budget` seeded random samples. `None` means nothing was found.
pub fn find_witness(
    f: &Polynomial,
    alg: &GrassmannAlgebra,
    mode: WitnessMode,
    budget: usize,
    seed: u64,
) -> Result<Option<Witness>> {
    let vars: Vec<u32> = f.variables().into_iter().collect();
    for asg in structured_assignments(alg, &vars) {
        let value = alg.evaluate(f, &asg)?;
        if hits(&value, mode) {
            return Ok(Some(Witness {
                assignment: asg,
                value,
                n: alg.n,
                seed,
                sample: None,
            }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for sample in 0..budget {
        let asg: BTreeMap<u32, GrassmannElement> = vars
            .iter()
            .map(|&v| (v, alg.random_element(&mut rng, 3, 3)))
            .collect();
        let value = alg.evaluate(f, &asg)?;
        if hits(&value, mode) {
            return Ok(Some(Witness {
                assignment: asg,
                value,
                n: alg.n,
                seed,
                sample: Some(sample),
            }));
        }
    }
    Ok(None)
}
