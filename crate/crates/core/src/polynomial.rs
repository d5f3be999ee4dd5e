//! Sparse polynomials of the free associative algebra over GF(p).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::word::{Mode, Multidegree, Word};

/// A GF(p)-linear combination of words. Zero coefficients are never stored;
/// a nonunital polynomial never contains the empty word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    mode: Mode,
    terms: BTreeMap<Word, u32>,
}

/// A uniformly random word over `vars` with length in `min_len..=max_len`.
pub fn random_word<R: Rng>(rng: &mut R, vars: &[u32], min_len: usize, max_len: usize) -> Word {
    let len = rng.gen_range(min_len..=max_len);
    Word::new((0..len).map(|_| vars[rng.gen_range(0..vars.len())]).collect())
}

impl Polynomial {
    pub fn zero(field: Field, mode: Mode) -> Self {
        Polynomial {
            field,
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn var(field: Field, mode: Mode, i: u32) -> Self {
        Self::monomial(field, mode, Word::letter(i), 1).expect("letters are never constant")
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field, 1)
    }

    /// A scalar of the unital algebra.
    pub fn constant(field: Field, c: u32) -> Self {
        let mut p = Self::zero(field, Mode::Unital);
        let c = c % field.p();
        if c != 0 {
            p.terms.insert(Word::empty(), c);
        }
        p
    }

    pub fn monomial(field: Field, mode: Mode, word: Word, coeff: u32) -> Result<Self> {
        Self::from_terms(field, mode, [(word, coeff)])
    }

    /// Sums the given terms; coefficients are reduced mod p.
    pub fn from_terms(
        field: Field,
        mode: Mode,
        terms: impl IntoIterator<Item = (Word, u32)>,
    ) -> Result<Self> {
        let mut p = Self::zero(field, mode);
        for (w, c) in terms {
            if w.is_empty() && mode == Mode::Nonunital && c % field.p() != 0 {
                return Err(Error::ConstantInNonunital);
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, w: Word, c: u32) {
        let c = c % self.field.p();
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(*e.get(), c);
                if s == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, u32)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> u32 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(&Word::empty())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter().copied())
            .collect()
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.mode != other.mode {
            return Err(Error::ModeMismatch(self.mode, other.mode));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.field;
        let c = c % f.p();
        let mut out = Self::zero(f, self.mode);
        if c != 0 {
            out.terms = self
                .terms
                .iter()
                .map(|(w, &a)| (w.clone(), f.mul(a, c)))
                .collect();
        }
        out
    }

    /// Concatenation product.
    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let f = self.field;
        let mut out = Self::zero(f, self.mode);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.concat(b), f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// `[u, v] = uv - vu`.
    pub fn commutator(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// `self^n`; `n = 0` only in unital mode.
    pub fn pow(&self, n: u32) -> Result<Polynomial> {
        if n == 0 {
            if self.mode == Mode::Nonunital {
                return Err(Error::ConstantInNonunital);
            }
            return Ok(Self::one(self.field));
        }
        let mut acc: Option<Polynomial> = None;
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.try_mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc.expect("n > 0"))
    }

    /// Applies the algebra endomorphism extending `images`; variables without
    /// an image are fixed. Map a variable to the zero polynomial to kill it.
    pub fn substitute(&self, images: &BTreeMap<u32, Polynomial>) -> Result<Polynomial> {
        for img in images.values() {
            if img.field != self.field {
                return Err(Error::FieldMismatch(self.field.p(), img.field.p()));
            }
            if self.mode == Mode::Nonunital && img.constant_term() != 0 {
                return Err(Error::ConstantInNonunital);
            }
        }
        let coerced: BTreeMap<u32, Polynomial> = images
            .iter()
            .map(|(&v, img)| Ok((v, img.with_mode(self.mode)?)))
            .collect::<Result<_>>()?;
        let f = self.field;
        let mut out = Self::zero(f, self.mode);
        for (w, &c) in &self.terms {
            let mut acc: BTreeMap<Word, u32> = BTreeMap::new();
            acc.insert(Word::empty(), c);
            for &x in w.letters() {
                let mut next: BTreeMap<Word, u32> = BTreeMap::new();
                match coerced.get(&x) {
                    None => {
                        for (a, ca) in acc {
                            let mut l = a.into_letters();
                            l.push(x);
                            next.insert(Word::new(l), ca);
                        }
                    }
                    Some(img) => {
                        for (a, &ca) in &acc {
                            for (b, &cb) in &img.terms {
                                let e = next.entry(a.concat(b)).or_insert(0);
                                *e = f.add(*e, f.mul(ca, cb));
                            }
                        }
                        next.retain(|_, c| *c != 0);
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            for (a, ca) in acc {
                out.add_term(a, ca);
            }
        }
        Ok(out)
    }

    /// Reinterprets the polynomial in another mode. Moving to nonunital mode
    /// fails when there is a constant term.
    pub fn with_mode(&self, mode: Mode) -> Result<Polynomial> {
        if mode == Mode::Nonunital && self.constant_term() != 0 {
            return Err(Error::ConstantInNonunital);
        }
        Ok(Polynomial {
            field: self.field,
            mode,
            terms: self.terms.clone(),
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Word::multidegree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Splits into multihomogeneous components.
    pub fn components(&self) -> BTreeMap<Multidegree, Polynomial> {
        let mut out: BTreeMap<Multidegree, Polynomial> = BTreeMap::new();
        for (w, &c) in &self.terms {
            out.entry(w.multidegree())
                .or_insert_with(|| Self::zero(self.field, self.mode))
                .terms
                .insert(w.clone(), c);
        }
        out
    }

    /// A random polynomial with up to `max_terms` terms over `vars`, word
    /// lengths `1..=max_degree` (and occasionally a constant in unital mode).
    pub fn random<R: Rng>(field: Field, mode: Mode, rng: &mut R, vars: &[u32], max_degree: usize, max_terms: usize) -> Polynomial {
        let mut f = Polynomial::zero(field, mode);
        for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
            let w = if mode == Mode::Unital && rng.gen_ratio(1, 8) {
                Word::empty()
            } else {
                random_word(rng, vars, 1, max_degree)
            };
            f.add_term(w, rng.gen_range(1..field.p()));
        }
        f
    }
}

impl fmt::Display for Polynomial {
    /// Terms in canonical order with symmetric coefficients, e.g.
    /// `x1*x2 - x2*x1`. The output parses back to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, &c)) in self.terms.iter().enumerate() {
            let s = self.field.signed(c);
            let mag = s.unsigned_abs();
            if i == 0 {
                if s < 0 {
                    f.write_str("-")?;
                }
            } else if s < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

// Operator sugar. These panic on field or mode mismatch; use the `try_*`
// methods where the operands are not known to agree.
impl ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("incompatible operands")
    }
}

impl ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("incompatible operands")
    }
}

impl ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("incompatible operands")
    }
}

impl ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
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
    fn concatenation() {
        let p = &x(1) * &x(2);
        assert_eq!(p.to_string(), "x1*x2");
        let q = &(&x(1) + &x(2)) * &x(1);
        assert_eq!(q.coeff(&Word::new(vec![1, 1])), 1);
        assert_eq!(q.coeff(&Word::new(vec![2, 1])), 1);
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn unit_is_identity() {
        let f = Polynomial::var(f3(), Mode::Unital, 1);
        let g = &f + &Polynomial::var(f3(), Mode::Unital, 2);
        assert_eq!(&Polynomial::one(f3()) * &g, g);
    }

    #[test]
    fn commutator_basics() {
        let c = x(1).commutator(&x(2)).unwrap();
        assert_eq!(c.to_string(), "x1*x2 - x2*x1");
        let u = &x(1) + &(&x(2) * &x(3));
        assert!(u.commutator(&u).unwrap().is_zero());
    }

    #[test]
    fn product_rule_for_commutators() {
        let lhs = x(1).commutator(&(&x(2) * &x(3))).unwrap();
        let rhs = &(&x(1).commutator(&x(2)).unwrap() * &x(3))
            + &(&x(2) * &x(1).commutator(&x(3)).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mismatches_are_errors() {
        let u = Polynomial::var(f3(), Mode::Unital, 1);
        assert!(matches!(x(1).try_mul(&u), Err(Error::ModeMismatch(..))));
        let g = Polynomial::var(Field::new(5).unwrap(), Mode::Nonunital, 1);
        assert!(matches!(x(1).try_add(&g), Err(Error::FieldMismatch(3, 5))));
        assert_eq!(x(1).pow(0), Err(Error::ConstantInNonunital));
    }

    #[test]
    fn substitution() {
        let c = x(1).commutator(&x(2)).unwrap();
        let s = BTreeMap::from([(1, x(2))]);
        assert!(c.substitute(&s).unwrap().is_zero());

        let f = &(&x(1) * &x(2)) + &(&x(2) * &x(3));
        let s = BTreeMap::from([(1, Polynomial::zero(f3(), Mode::Nonunital))]);
        assert_eq!(f.substitute(&s).unwrap(), &x(2) * &x(3));

        let s = BTreeMap::from([(1, Polynomial::constant(f3(), 1))]);
        assert_eq!(f.substitute(&s), Err(Error::ConstantInNonunital));
    }

    #[test]
    fn components_split() {
        let f = &(&x(1) * &x(2)) + &x(1);
        let comps = f.components();
        assert_eq!(comps.len(), 2);
        assert!(!f.is_homogeneous());
    }
}
