//! Sparse row-echelon spans over GF(p).
//!
//! Insertion only reduces the new vector against existing rows (forward
//! elimination), which keeps rows short while a span is being built.
//! [`Echelon::reduce`] then back-substitutes once, leaving every row with a
//! leading 1 and zeros in all other pivot columns. In that state the pivot
//! entries of a member vector are its coordinates in the row basis.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::field::Field;

/// `(column, nonzero value)` pairs sorted by column.
pub type SparseVec = Vec<(u32, u32)>;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<u32>,
    scratch: Vec<u32>,
    entries: usize,
    reduced: bool,
}

impl Echelon {
    pub fn new(field: Field, ncols: usize) -> Self {
        Echelon {
            field,
            ncols,
            rows: Vec::new(),
            pivot_row: vec![NONE; ncols],
            scratch: vec![0; ncols],
            entries: 0,
            reduced: true,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Total nonzero entries over all rows.
    pub fn entries(&self) -> usize {
        self.entries
    }

    /// Whether the rows are in reduced row-echelon form.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize] != NONE
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<u32> {
        (0..self.ncols as u32).filter(|&c| self.is_pivot(c)).collect()
    }

    /// The row with the given pivot column.
    pub fn row_for_pivot(&self, col: u32) -> Option<&SparseVec> {
        match self.pivot_row[col as usize] {
            NONE => None,
            r => Some(&self.rows[r as usize]),
        }
    }

    /// Rows ordered by pivot column.
    pub fn rows(&self) -> Vec<&SparseVec> {
        self.pivots()
            .into_iter()
            .map(|c| &self.rows[self.pivot_row[c as usize] as usize])
            .collect()
    }

    /// Forward reduction of `v`: returns the residual and the multiple of
    /// each pivot row that was subtracted.
    fn reduce_tracked(&self, v: &[(u32, u32)]) -> (SparseVec, Vec<(u32, u32)>) {
        let f = self.field;
        let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
        for &(c, a) in v {
            let e = acc.entry(c).or_insert(0);
            *e = f.add(*e, a % f.p());
        }
        let mut residual = Vec::new();
        let mut used = Vec::new();
        while let Some((c, a)) = acc.pop_first() {
            if a == 0 {
                continue;
            }
            match self.pivot_row[c as usize] {
                NONE => residual.push((c, a)),
                r => {
                    used.push((c, a));
                    for &(c2, b) in &self.rows[r as usize][1..] {
                        let e = acc.entry(c2).or_insert(0);
                        *e = f.sub(*e, f.mul(a, b));
                    }
                }
            }
        }
        (residual, used)
    }

    /// Residual of `v` after reduction by the rows; empty iff `v` is in the span.
    pub fn residual(&self, v: &[(u32, u32)]) -> SparseVec {
        self.reduce_tracked(v).0
    }

    /// Coordinates of a member vector in the row basis, keyed by pivot column.
    pub fn combination(&self, v: &[(u32, u32)]) -> Vec<(u32, u32)> {
        self.reduce_tracked(v).1
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(u32, u32)]) -> bool {
        let f = self.field;
        let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::with_capacity(v.len() * 2);
        for &(c, a) in v {
            let s = &mut self.scratch[c as usize];
            *s = f.add(*s, a % f.p());
            heap.push(Reverse(c));
        }
        let mut row: SparseVec = Vec::new();
        let mut last = NONE;
        while let Some(Reverse(c)) = heap.pop() {
            if c == last {
                continue;
            }
            last = c;
            let a = std::mem::take(&mut self.scratch[c as usize]);
            if a == 0 {
                continue;
            }
            let r = self.pivot_row[c as usize];
            if r == NONE {
                row.push((c, a));
                continue;
            }
            for &(c2, b) in &self.rows[r as usize][1..] {
                let s = &mut self.scratch[c2 as usize];
                *s = f.sub(*s, f.mul(a, b));
                heap.push(Reverse(c2));
            }
        }
        if row.is_empty() {
            return false;
        }
        let inv = f.inv(row[0].1);
        for e in row.iter_mut() {
            e.1 = f.mul(e.1, inv);
        }
        let pc = row[0].0;
        self.pivot_row[pc as usize] = self.rows.len() as u32;
        self.entries += row.len();
        self.rows.push(row);
        self.reduced = false;
        true
    }

    /// Back-substitution: clears every pivot column outside its own row.
    pub fn reduce(&mut self) {
        if self.reduced {
            return;
        }
        let f = self.field;
        for pc in self.pivots().into_iter().rev() {
            let r = self.pivot_row[pc as usize] as usize;
            let row = std::mem::take(&mut self.rows[r]);
            if row[1..].iter().all(|&(c, _)| !self.is_pivot(c)) {
                self.rows[r] = row;
                continue;
            }
            let mut touched = Vec::with_capacity(row.len() * 2);
            for &(c, a) in &row {
                self.scratch[c as usize] = a;
                touched.push(c);
            }
            for &(c, _) in &row[1..] {
                let piv = self.pivot_row[c as usize];
                if piv == NONE {
                    continue;
                }
                let a = std::mem::take(&mut self.scratch[c as usize]);
                // rows with larger pivots are already reduced: no pivot
                // columns besides their own
                for &(c2, b) in &self.rows[piv as usize][1..] {
                    let s = &mut self.scratch[c2 as usize];
                    *s = f.sub(*s, f.mul(a, b));
                    touched.push(c2);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let mut out = Vec::with_capacity(touched.len());
            for c in touched {
                let s = std::mem::take(&mut self.scratch[c as usize]);
                if s != 0 {
                    out.push((c, s));
                }
            }
            self.entries = self.entries + out.len() - row.len();
            self.rows[r] = out;
        }
        self.reduced = true;
    }
}
