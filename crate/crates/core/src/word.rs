//! Words over the variables `x0, x1, ...` and their multidegrees.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Unital (`k1<X>`, constants allowed) or nonunital (`k0<X>`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Unital,
    Nonunital,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Unital => f.write_str("unital"),
            Mode::Nonunital => f.write_str("nonunital"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unital" => Ok(Mode::Unital),
            "nonunital" => Ok(Mode::Nonunital),
            _ => Err(format!("unknown mode '{s}' (expected unital or nonunital)")),
        }
    }
}

/// A monomial of the free algebra: a finite sequence of variable indices.
///
/// Ordered degree-lexicographically: shorter words first, then letter by
/// letter with `x0 < x1 < ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u32>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u32) -> Self {
        Word(vec![i])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn multidegree(&self) -> Multidegree {
        let mut d = Multidegree::default();
        for &x in &self.0 {
            d.bump(x);
        }
        d
    }

    pub fn into_letters(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

/// `x1^2*x2` style rendering; the empty word renders as `1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let x = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == x {
                run += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if run == 1 {
                write!(f, "x{x}")?;
            } else {
                write!(f, "x{x}^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Per-variable letter counts. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(BTreeMap<u32, u32>);

impl Multidegree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds `(d_1, ..., d_k)` on the variables `x1..xk`.
    pub fn from_degrees(degrees: &[u32]) -> Self {
        Self::from_pairs(
            degrees
                .iter()
                .enumerate()
                .map(|(i, &d)| (i as u32 + 1, d)),
        )
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (v, d) in pairs {
            if d > 0 {
                *m.entry(v).or_insert(0) += d;
            }
        }
        Multidegree(m)
    }

    pub fn get(&self, v: u32) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn bump(&mut self, v: u32) {
        *self.0.entry(v).or_insert(0) += 1;
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(|(&v, &d)| (v, d))
    }

    pub fn variables(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.keys().copied()
    }

    /// `self - x_v`, or `None` when `v` does not occur.
    pub fn minus_var(&self, v: u32) -> Option<Multidegree> {
        let d = self.get(v);
        if d == 0 {
            return None;
        }
        let mut m = self.0.clone();
        if d == 1 {
            m.remove(&v);
        } else {
            m.insert(v, d - 1);
        }
        Some(Multidegree(m))
    }

    pub fn le(&self, other: &Multidegree) -> bool {
        self.0.iter().all(|(&v, &d)| other.get(v) >= d)
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Self::from_pairs(self.iter().chain(other.iter()))
    }

    pub fn scaled(&self, k: u32) -> Multidegree {
        Self::from_pairs(self.iter().map(|(v, d)| (v, d * k)))
    }

    /// `self - other` if `other <= self`.
    pub fn checked_sub(&self, other: &Multidegree) -> Option<Multidegree> {
        if !other.le(self) {
            return None;
        }
        Some(Self::from_pairs(
            self.iter().map(|(v, d)| (v, d - other.get(v))),
        ))
    }

    /// Every multidegree `c` with `c <= self`, including the empty one.
    pub fn sub_degrees(&self) -> Vec<Multidegree> {
        let entries: Vec<(u32, u32)> = self.iter().collect();
        let mut out = vec![Multidegree::new()];
        for (v, d) in entries {
            let mut next = Vec::with_capacity(out.len() * (d as usize + 1));
            for base in &out {
                for k in 0..=d {
                    let mut m = base.0.clone();
                    if k > 0 {
                        m.insert(v, k);
                    }
                    next.push(Multidegree(m));
                }
            }
            out = next;
        }
        out
    }

    /// Number of words with this multidegree.
    pub fn word_count(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut n: u128 = 0;
        for (_, d) in self.iter() {
            for j in 1..=d as u128 {
                n += 1;
                acc = acc * n / j;
            }
        }
        acc
    }

    /// All words with exactly this multidegree, in canonical (lexicographic) order.
    pub fn words(&self) -> Vec<Word> {
        let vars: Vec<u32> = self.variables().collect();
        let mut remaining: Vec<u32> = vars.iter().map(|&v| self.get(v)).collect();
        let total = self.total() as usize;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(total);
        fn rec(
            vars: &[u32],
            remaining: &mut [u32],
            cur: &mut Vec<u32>,
            total: usize,
            out: &mut Vec<Word>,
        ) {
            if cur.len() == total {
                out.push(Word(cur.clone()));
                return;
            }
            for i in 0..vars.len() {
                if remaining[i] > 0 {
                    remaining[i] -= 1;
                    cur.push(vars[i]);
                    rec(vars, remaining, cur, total, out);
                    cur.pop();
                    remaining[i] += 1;
                }
            }
        }
        rec(&vars, &mut remaining, &mut cur, total, &mut out);
        out
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, d)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "x{v}:{d}")?;
        }
        f.write_str("}")
    }
}
