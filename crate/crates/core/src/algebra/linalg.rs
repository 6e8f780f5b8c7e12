//! Exact sparse row reduction. Columns are plain indices; the pivot of a row
//! is its smallest column, so callers choose the elimination order by how
//! they number columns.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

/// A subspace in row echelon form. Rows inserted with [`Echelon::insert`]
/// are only forward-reduced; [`Echelon::finish`] back-substitutes so that
/// every row has a unit pivot and no other row touches that column, which
/// makes the representation canonical.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

pub(crate) fn axpy(target: &mut SparseVec, factor: &Rational, source: &SparseVec) {
    for (col, val) in source {
        let entry = target.entry(*col).or_insert_with(Rational::zero);
        *entry += factor * val;
        if entry.is_zero() {
            target.remove(col);
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows.get(&pivot)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec)> {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    /// Reduces `v` modulo the subspace in place, scanning columns in
    /// increasing order.
    pub fn reduce(&self, v: &mut SparseVec) {
        let mut cursor = 0;
        loop {
            let next = v
                .range(cursor..)
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((p, c)) = next else { break };
            axpy(v, &-c, &self.rows[&p]);
            cursor = p + 1;
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_empty()
    }

    /// Adds `v` to the spanning set. Returns whether the rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        self.reduce(&mut v);
        let Some((&pivot, lead)) = v.iter().next() else {
            return false;
        };
        if !lead.is_one() {
            let inv = Rational::one() / lead.clone();
            for val in v.values_mut() {
                *val *= &inv;
            }
        }
        self.rows.insert(pivot, v);
        true
    }

    /// Back-substitution into reduced row echelon form.
    pub fn finish(&mut self) {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for p in pivots {
            let mut row = self.rows.remove(&p).expect("pivot row");
            let later: Vec<usize> = row
                .keys()
                .skip(1)
                .filter(|c| self.rows.contains_key(c))
                .copied()
                .collect();
            for q in later {
                if let Some(c) = row.get(&q).cloned() {
                    axpy(&mut row, &-c, &self.rows[&q]);
                }
            }
            self.rows.insert(p, row);
        }
    }

    /// Basis of the intersection with `other` (Zassenhaus), in reduced form.
    /// `width` must exceed every column index used by either subspace.
    pub fn intersection(&self, other: &Echelon, width: usize) -> Echelon {
        let mut big = Echelon::new();
        for (_, row) in self.rows() {
            let mut v = row.clone();
            for (c, x) in row {
                v.insert(c + width, x.clone());
            }
            big.insert(v);
        }
        for (_, row) in other.rows() {
            big.insert(row.clone());
        }
        let mut out = Echelon::new();
        for (pivot, row) in big.rows() {
            if pivot >= width {
                out.insert(row.iter().map(|(c, x)| (c - width, x.clone())).collect());
            }
        }
        out.finish();
        out
    }
}
