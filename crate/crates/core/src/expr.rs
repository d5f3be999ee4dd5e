//! Parser for the polynomial expression language:
//!
//! ```text
//! poly   := ['-'] term (('+' | '-') term)*
//! term   := [int ['*']] factor (['*'] factor)* | int
//! factor := atom ('^' uint)*
//! atom   := 'x' uint | '(' poly ')' | '[' poly ',' poly ']'
//!         | 'w(' uint ')' | 'phi(' uint ')' | 'kappa(' poly ',' poly ')'
//! ```
//!
//! Integers are reduced mod p. `Display` output of a polynomial parses back
//! to the same polynomial.

use crate::builders::{build_phi_prime, build_w, kappa};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::polynomial::Polynomial;
use crate::word::Mode;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: Field,
    mode: Mode,
}

/// Parses `input` into a polynomial over `field` in `mode`.
pub fn parse_poly(input: &str, field: Field, mode: Mode) -> Result<Polynomial> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
        field,
        mode,
    };
    let f = p.poly()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(f)
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = pos - before.iter().rposition(|&b| b == b'\n').map(|i| i + 1).unwrap_or(0) + 1;
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if self.src.get(self.pos..end) == Some(kw.as_bytes()) && self.src.get(end) == Some(&b'(') {
            self.pos = end;
            true
        } else {
            false
        }
    }

    /// Digits as a decimal string (arbitrary length).
    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        match self.digits() {
            Some(d) => d.parse().map_err(|_| self.error_at(start, "integer out of range")),
            None => Err(self.error("expected an integer")),
        }
    }

    /// An integer literal reduced mod p.
    fn scalar(&mut self) -> Option<u32> {
        let d = self.digits()?;
        let p = self.field.p() as u64;
        Some(d.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p) as u32)
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.field, self.mode);
        let mut negate = self.eat(b'-');
        loop {
            let t = self.term()?;
            acc = acc.try_add(&if negate { t.neg() } else { t })?;
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(b'x' | b'(' | b'[' | b'w' | b'p' | b'k'))
    }

    fn term(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        let coeff = self.scalar();
        if let Some(c) = coeff {
            let had_star = self.eat(b'*');
            if !self.starts_factor() {
                if had_star {
                    return Err(self.error("expected a factor after '*'"));
                }
                return match self.mode {
                    Mode::Unital => Ok(Polynomial::constant(self.field, c)),
                    Mode::Nonunital if c == 0 => Ok(Polynomial::zero(self.field, self.mode)),
                    Mode::Nonunital => Err(self.error_at(start, "constant term in nonunital mode")),
                };
            }
        }
        let mut acc = self.factor()?;
        loop {
            let save = self.pos;
            let star = self.eat(b'*');
            if self.starts_factor() {
                acc = acc.try_mul(&self.factor()?)?;
            } else {
                if star {
                    return Err(self.error("expected a factor after '*'"));
                }
                self.pos = save;
                break;
            }
        }
        Ok(match coeff {
            Some(c) => acc.scale(c),
            None => acc,
        })
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let mut base = self.atom()?;
        while self.eat(b'^') {
            let at = self.pos;
            let n = self.uint()?;
            base = base.pow(n).map_err(|e| self.error_at(at, e.to_string()))?;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let start = self.pos;
        if self.keyword("w") {
            self.expect(b'(')?;
            let m = self.uint()?;
            self.expect(b')')?;
            return build_w(self.field, self.mode, m, None).map_err(|e| self.error_at(start, e.to_string()));
        }
        if self.keyword("phi") {
            self.expect(b'(')?;
            let m = self.uint()?;
            self.expect(b')')?;
            return build_phi_prime(self.field, self.mode, m).map_err(|e| self.error_at(start, e.to_string()));
        }
        if self.keyword("kappa") {
            self.expect(b'(')?;
            let a = self.poly()?;
            self.expect(b',')?;
            let b = self.poly()?;
            self.expect(b')')?;
            return kappa(&a, &b);
        }
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let i = self.uint()?;
                Ok(Polynomial::var(self.field, self.mode, i))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.poly()?;
                self.expect(b')')?;
                Ok(f)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.poly()?;
                self.expect(b',')?;
                let b = self.poly()?;
                self.expect(b']')?;
                a.commutator(&b)
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
