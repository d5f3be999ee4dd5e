//! Canonical coordinates modulo `T(G0) = {x^p}^T0 + T3` over the basis of
//! structured words `beg * prod [x_j, x_j'] x_j^b x_j'^b'`.
//!
//! Reduction works letter by letter from the left, keeping every
//! intermediate term in structured form. Appending a letter `x` to a term
//! whose beginning is the sorted word `B`:
//!
//! * if `x` already occurs in a commutator block, it is central next to that
//!   block, so only its tail exponent grows;
//! * otherwise `x` is moved left past every letter `y > x` of `B` using
//!   `y x = x y - [x, y]`. Commutators are central modulo `T3`, so each
//!   swap leaves `-[x, y] * (B without one y)`. From then on `x` and `y` sit
//!   in a commutator and commute with everything, so their remaining powers
//!   migrate to the tail of the new block.
//!
//! Commutator letters are kept as one sorted list: the product of
//! commutators is alternating in its `2s` slots, so inserting a new pair
//! costs the sign of the sorting permutation. A beginning exponent reaching
//! `p`, or an end variable of total degree above `p`, contains a `p`-th
//! power and the term is dropped.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::polynomial::Polynomial;
use crate::word::{Mode, Multidegree, Word};

/// One end factor `[x_first, x_second] x_first^first_tail x_second^second_tail`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndBlock {
    pub first: u32,
    pub second: u32,
    pub first_tail: u32,
    pub second_tail: u32,
}

/// A structured word: a sorted power product followed by commutator blocks.
///
/// Ordered by number of blocks, then beginning, then end.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BssWord {
    /// `(variable, exponent)`, variables strictly increasing.
    beginning: Vec<(u32, u32)>,
    /// `(variable, tail exponent)` for the commutator letters, strictly
    /// increasing; consecutive pairs form the blocks.
    end: Vec<(u32, u32)>,
}

impl Ord for BssWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.end
            .len()
            .cmp(&other.end.len())
            .then_with(|| self.beginning.cmp(&other.beginning))
            .then_with(|| self.end.cmp(&other.end))
    }
}

impl PartialOrd for BssWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_bss: bool,
    pub is_spss: bool,
}

impl BssWord {
    /// Builds and structurally validates a word (exponent bounds are not
    /// checked here; see [`classify_word`]).
    pub fn new(beginning: Vec<(u32, u32)>, blocks: Vec<EndBlock>) -> Result<Self> {
        let mut end = Vec::with_capacity(blocks.len() * 2);
        for b in &blocks {
            end.push((b.first, b.first_tail));
            end.push((b.second, b.second_tail));
        }
        let w = BssWord { beginning, end };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<()> {
        if self.beginning.is_empty() && self.end.is_empty() {
            return Err(Error::Malformed("empty word".into()));
        }
        if self.beginning.windows(2).any(|p| p[0].0 >= p[1].0) {
            return Err(Error::Malformed("beginning variables must be strictly increasing".into()));
        }
        if self.beginning.iter().any(|&(_, a)| a == 0) {
            return Err(Error::Malformed("beginning exponents must be positive".into()));
        }
        if !self.end.len().is_multiple_of(2) {
            return Err(Error::Malformed("end letters must pair up".into()));
        }
        if self.end.windows(2).any(|p| p[0].0 >= p[1].0) {
            return Err(Error::Malformed("end variables must be strictly increasing".into()));
        }
        if self
            .beginning
            .iter()
            .any(|&(v, _)| self.end.binary_search_by_key(&v, |e| e.0).is_ok())
        {
            return Err(Error::Malformed("beginning and end share a variable".into()));
        }
        Ok(())
    }

    pub fn beginning(&self) -> &[(u32, u32)] {
        &self.beginning
    }

    pub fn blocks(&self) -> Vec<EndBlock> {
        self.end
            .chunks(2)
            .map(|c| EndBlock {
                first: c[0].0,
                second: c[1].0,
                first_tail: c[0].1,
                second_tail: c[1].1,
            })
            .collect()
    }

    pub fn beginning_length(&self) -> usize {
        self.beginning.len()
    }

    pub fn end_length(&self) -> usize {
        self.end.len() / 2
    }

    pub fn multidegree(&self) -> Multidegree {
        Multidegree::from_pairs(
            self.beginning
                .iter()
                .copied()
                .chain(self.end.iter().map(|&(v, b)| (v, b + 1))),
        )
    }

    /// The word as an element of the free algebra.
    pub fn reconstruct(&self, field: Field) -> Polynomial {
        let mode = Mode::Nonunital;
        let mut letters = Vec::new();
        for &(v, a) in &self.beginning {
            letters.extend(std::iter::repeat_n(v, a as usize));
        }
        let mut acc = if letters.is_empty() {
            None
        } else {
            Some(Polynomial::monomial(field, mode, Word::new(letters), 1).expect("nonempty"))
        };
        for b in self.blocks() {
            let x = Polynomial::var(field, mode, b.first);
            let y = Polynomial::var(field, mode, b.second);
            let mut block = x.commutator(&y).expect("same mode");
            let mut tail = Vec::new();
            tail.extend(std::iter::repeat_n(b.first, b.first_tail as usize));
            tail.extend(std::iter::repeat_n(b.second, b.second_tail as usize));
            if !tail.is_empty() {
                block = &block * &Polynomial::monomial(field, mode, Word::new(tail), 1).expect("nonempty");
            }
            acc = Some(match acc {
                None => block,
                Some(a) => &a * &block,
            });
        }
        acc.expect("validated words are nonempty")
    }
}

impl fmt::Display for BssWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let pow = |v: u32, e: u32| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") };
        for &(v, a) in &self.beginning {
            parts.push(pow(v, a));
        }
        for b in self.blocks() {
            parts.push(format!("[x{},x{}]", b.first, b.second));
            if b.first_tail > 0 {
                parts.push(pow(b.first, b.first_tail));
            }
            if b.second_tail > 0 {
                parts.push(pow(b.second, b.second_tail));
            }
        }
        f.write_str(&parts.join("*"))
    }
}

/// BSS: beginning exponents below `p`, end variables of total degree at most
/// `p`. SPSS: BSS with some end variable of total degree below `p`.
pub fn classify_word(w: &BssWord, field: Field) -> Result<Classification> {
    w.validate()?;
    let p = field.p();
    let is_bss = w.beginning.iter().all(|&(_, a)| a < p) && w.end.iter().all(|&(_, b)| b < p);
    let is_spss = is_bss && w.end.iter().any(|&(_, b)| b + 1 < p);
    Ok(Classification { is_bss, is_spss })
}

fn bump(map: &mut BTreeMap<BssWord, u32>, field: Field, w: BssWord, c: u32) {
    if c == 0 {
        return;
    }
    let e = map.entry(w).or_insert(0);
    *e = field.add(*e, c);
}

/// Right-multiplies the structured term `c * w` by the letter `x`.
fn push_letter(w: &BssWord, c: u32, x: u32, field: Field, out: &mut BTreeMap<BssWord, u32>) {
    let p = field.p();
    if let Ok(k) = w.end.binary_search_by_key(&x, |e| e.0) {
        if w.end[k].1 + 2 > p {
            return;
        }
        let mut next = w.clone();
        next.end[k].1 += 1;
        bump(out, field, next, c);
        return;
    }
    let pos = w.beginning.partition_point(|&(v, _)| v < x);
    let x_count = match w.beginning.get(pos) {
        Some(&(v, a)) if v == x => a,
        _ => 0,
    };
    if x_count + 1 < p {
        let mut next = w.clone();
        if x_count > 0 {
            next.beginning[pos].1 += 1;
        } else {
            next.beginning.insert(pos, (x, 1));
        }
        bump(out, field, next, c);
    }
    let first_greater = if x_count > 0 { pos + 1 } else { pos };
    for &(y, a) in &w.beginning[first_greater..] {
        let mut coeff = field.neg(field.mul(c, field.reduce(a as u64)));
        let beginning: Vec<(u32, u32)> = w
            .beginning
            .iter()
            .copied()
            .filter(|&(v, _)| v != x && v != y)
            .collect();
        let above_x = w.end.len() - w.end.partition_point(|e| e.0 < x);
        let above_y = w.end.len() - w.end.partition_point(|e| e.0 < y);
        if (above_x + above_y) % 2 == 1 {
            coeff = field.neg(coeff);
        }
        let mut end = w.end.clone();
        let ix = end.partition_point(|e| e.0 < x);
        end.insert(ix, (x, x_count));
        let iy = end.partition_point(|e| e.0 < y);
        end.insert(iy, (y, a - 1));
        bump(out, field, BssWord { beginning, end }, coeff);
    }
}

fn fold_word(start: BTreeMap<BssWord, u32>, letters: &[u32], field: Field) -> BTreeMap<BssWord, u32> {
    let mut state = start;
    for &x in letters {
        let mut next = BTreeMap::new();
        for (w, c) in &state {
            push_letter(w, *c, x, field, &mut next);
        }
        next.retain(|_, c| *c != 0);
        state = next;
        if state.is_empty() {
            break;
        }
    }
    state
}

/// Coordinates of an element of `k0<X>/T(G0)` over the BSS basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    field: Field,
    coords: BTreeMap<BssWord, u32>,
}

impl NormalForm {
    pub fn zero(field: Field) -> Self {
        NormalForm {
            field,
            coords: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BssWord, u32)> {
        self.coords.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &BssWord) -> u32 {
        self.coords.get(w).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        let mut coords = self.coords.clone();
        for (w, &c) in &other.coords {
            bump(&mut coords, self.field, w.clone(), c);
        }
        coords.retain(|_, c| *c != 0);
        NormalForm {
            field: self.field,
            coords,
        }
    }

    pub fn scale(&self, c: u32) -> NormalForm {
        let f = self.field;
        let mut coords = BTreeMap::new();
        for (w, &a) in &self.coords {
            bump(&mut coords, f, w.clone(), f.mul(a, c));
        }
        NormalForm { field: f, coords }
    }

    pub fn sub(&self, other: &NormalForm) -> NormalForm {
        self.add(&other.scale(self.field.neg(1)))
    }

    /// Normal form of `reconstruct(self) * g`, computed without expanding
    /// the left factor.
    pub fn mul_poly(&self, g: &Polynomial) -> Result<NormalForm> {
        if g.mode() != Mode::Nonunital {
            return Err(Error::ModeMismatch(g.mode(), Mode::Nonunital));
        }
        if g.field() != self.field {
            return Err(Error::FieldMismatch(g.field().p(), self.field.p()));
        }
        let f = self.field;
        let mut coords = BTreeMap::new();
        for (w, c) in g.terms() {
            let start: BTreeMap<BssWord, u32> = self
                .coords
                .iter()
                .map(|(b, &a)| (b.clone(), f.mul(a, c)))
                .collect();
            for (b, a) in fold_word(start, w.letters(), f) {
                bump(&mut coords, f, b, a);
            }
        }
        coords.retain(|_, c| *c != 0);
        Ok(NormalForm { field: f, coords })
    }

    /// `sum c_u * u` as a free-algebra polynomial.
    pub fn reconstruct(&self) -> Polynomial {
        let mut acc = Polynomial::zero(self.field, Mode::Nonunital);
        for (w, &c) in &self.coords {
            acc = &acc + &w.reconstruct(self.field).scale(c);
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .coords
            .iter()
            .map(|(w, &c)| {
                let blocks: Vec<[u32; 4]> = w
                    .blocks()
                    .iter()
                    .map(|b| [b.first, b.second, b.first_tail, b.second_tail])
                    .collect();
                serde_json::json!({
                    "beginning": w.beginning.iter().map(|&(v, a)| [v, a]).collect::<Vec<_>>(),
                    "end": blocks,
                    "coeff": c,
                })
            })
            .collect();
        serde_json::Value::Array(items)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, &c)) in self.coords.iter().enumerate() {
            let s = self.field.signed(c);
            let mag = s.unsigned_abs();
            match (i, s < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Coordinates of `f + T(G0)` over the BSS basis.
pub fn reduce_poly(f: &Polynomial) -> Result<NormalForm> {
    if f.mode() != Mode::Nonunital {
        return Err(Error::ModeMismatch(f.mode(), Mode::Nonunital));
    }
    let field = f.field();
    let mut coords = BTreeMap::new();
    for (w, c) in f.terms() {
        let start = BTreeMap::from([(BssWord::default(), c)]);
        for (b, a) in fold_word(start, w.letters(), field) {
            bump(&mut coords, field, b, a);
        }
    }
    coords.retain(|_, c| *c != 0);
    Ok(NormalForm { field, coords })
}

/// Whether `f - g` lies in `T(G0)`.
pub fn equal_mod_tg0(f: &Polynomial, g: &Polynomial) -> Result<bool> {
    for h in [f, g] {
        if h.mode() != Mode::Nonunital {
            return Err(Error::ModeMismatch(h.mode(), Mode::Nonunital));
        }
    }
    Ok(reduce_poly(&f.try_sub(g)?)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_w;

    fn fp(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    fn x(p: u32, i: u32) -> Polynomial {
        Polynomial::var(fp(p), Mode::Nonunital, i)
    }

    fn word(p: u32, letters: &[u32]) -> Polynomial {
        Polynomial::monomial(fp(p), Mode::Nonunital, Word::new(letters.to_vec()), 1).unwrap()
    }

    #[test]
    fn single_swap() {
        let nf = reduce_poly(&word(3, &[2, 1])).unwrap();
        assert_eq!(nf.to_string(), "x1*x2 - [x1,x2]");
    }

    #[test]
    fn pth_powers_vanish() {
        assert!(reduce_poly(&word(3, &[1, 1, 1])).unwrap().is_zero());
        assert!(reduce_poly(&word(5, &[2, 2, 2, 2, 2])).unwrap().is_zero());
        assert!(!reduce_poly(&word(5, &[2, 2, 2, 2])).unwrap().is_zero());
    }

    #[test]
    fn repeated_commutator_variable_vanishes() {
        let c12 = x(3, 1).commutator(&x(3, 2)).unwrap();
        let c13 = x(3, 1).commutator(&x(3, 3)).unwrap();
        assert!(reduce_poly(&(&c12 * &c13)).unwrap().is_zero());
    }

    #[test]
    fn square_identity_p3() {
        let lhs = word(3, &[1, 1, 2, 2]);
        let x1x2 = word(3, &[1, 2]);
        let c = x(3, 1).commutator(&x(3, 2)).unwrap();
        let rhs = &(&x1x2 * &x1x2) + &(&c * &x1x2);
        assert!(equal_mod_tg0(&lhs, &rhs).unwrap());
    }

    #[test]
    fn unital_input_rejected() {
        let f = Polynomial::one(fp(3));
        assert!(matches!(reduce_poly(&f), Err(Error::ModeMismatch(..))));
    }

    #[test]
    fn swapped_words_differ() {
        assert!(!equal_mod_tg0(&word(3, &[1, 2]), &word(3, &[2, 1])).unwrap());
        let f = word(3, &[1, 2, 3]);
        assert!(equal_mod_tg0(&f, &(&f + &word(3, &[1, 1, 1]))).unwrap());
    }

    #[test]
    fn w_m_is_a_single_non_special_word() {
        for p in [3, 5] {
            for m in 1..=3u32 {
                if p == 5 && m == 3 {
                    continue;
                }
                let w = build_w(fp(p), Mode::Nonunital, m, None).unwrap();
                let nf = reduce_poly(&w).unwrap();
                assert_eq!(nf.len(), 1, "p={p} m={m}: {nf}");
                let (b, c) = nf.iter().next().unwrap();
                assert_eq!(c, 1);
                assert_eq!(b.end_length(), m as usize);
                assert_eq!(b.beginning_length(), 0);
                assert!(b.blocks().iter().all(|k| k.first_tail == p - 1 && k.second_tail == p - 1));
                let cl = classify_word(b, fp(p)).unwrap();
                assert!(cl.is_bss && !cl.is_spss);
            }
        }
    }

    #[test]
    fn classification() {
        let f = fp(3);
        let kw = BssWord::new(vec![], vec![EndBlock { first: 1, second: 2, first_tail: 2, second_tail: 2 }]).unwrap();
        assert_eq!(classify_word(&kw, f).unwrap(), Classification { is_bss: true, is_spss: false });
        let c = BssWord::new(vec![], vec![EndBlock { first: 1, second: 2, first_tail: 0, second_tail: 0 }]).unwrap();
        assert_eq!(classify_word(&c, f).unwrap(), Classification { is_bss: true, is_spss: true });
        let cube = BssWord::new(vec![(1, 3)], vec![]).unwrap();
        assert!(!classify_word(&cube, f).unwrap().is_bss);
    }

    #[test]
    fn malformed_words() {
        assert!(BssWord::new(vec![], vec![]).is_err());
        assert!(BssWord::new(vec![(2, 1), (1, 1)], vec![]).is_err());
        assert!(BssWord::new(vec![(1, 0)], vec![]).is_err());
        let clash = EndBlock { first: 1, second: 2, first_tail: 0, second_tail: 0 };
        assert!(BssWord::new(vec![(1, 1)], vec![clash]).is_err());
        let bad = EndBlock { first: 3, second: 2, first_tail: 0, second_tail: 0 };
        assert!(BssWord::new(vec![], vec![bad]).is_err());
    }

    #[test]
    fn reconstruction_is_idempotent() {
        let f = &(&word(3, &[3, 1, 2, 1]) + &word(3, &[2, 2, 1])) + &word(3, &[3, 2, 1]);
        let nf = reduce_poly(&f).unwrap();
        assert_eq!(reduce_poly(&nf.reconstruct()).unwrap(), nf);
    }

    #[test]
    fn mul_poly_matches_direct_reduction() {
        let a = &word(3, &[2, 1, 3]) + &word(3, &[3, 3]);
        let b = &word(3, &[1, 2]) + &word(3, &[3]);
        let direct = reduce_poly(&(&a * &b)).unwrap();
        let staged = reduce_poly(&a).unwrap().mul_poly(&b).unwrap();
        assert_eq!(direct, staged);
    }

    #[test]
    fn json_shape() {
        let nf = reduce_poly(&word(3, &[2, 1])).unwrap();
        let j = nf.to_json();
        assert_eq!(j[1]["end"][0], serde_json::json!([1, 2, 0, 0]));
        assert_eq!(j[1]["coeff"], 2);
    }
}
