// SPDX-License-Identifier: Apache-2.0
//! Fraction-free row elimination.
//!
//! Rows are kept as primitive integer vectors (denominators cleared, content
//! divided out) during forward elimination. Rationals only appear in the final
//! back-substitution to reduced row echelon form.

use std::collections::BTreeMap;

use super::sparse::SparseVec;
use crate::rat::{denom_lcm, int_gcd, Rat};

/// Scale `v` to a primitive integer vector with positive leading entry.
pub fn primitive(v: &SparseVec) -> SparseVec {
    let mut lcm = Rat::one();
    for (_, c) in v.iter() {
        if !c.is_integer() {
            lcm = denom_lcm(&lcm, c);
        }
    }
    let w = if lcm.is_one() { v.clone() } else { v.scaled(&lcm) };
    let mut g = Rat::zero();
    for (_, c) in w.iter() {
        g = int_gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    let lead_neg = w.leading().is_some_and(|(_, c)| c.is_negative());
    if g.is_zero() {
        return w;
    }
    let s = if lead_neg { -&g.recip() } else { g.recip() };
    if s.is_one() {
        w
    } else {
        w.scaled(&s)
    }
}

/// Incremental row echelon form over primitive integer rows.
#[derive(Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// Residual of `v` after eliminating every pivot column; zero iff `v` is in the row span.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = primitive(v);
        let mut cursor = 0usize;
        loop {
            let next = v.iter().map(|(i, _)| i).find(|i| *i >= cursor && self.pivot_row.contains_key(i));
            let Some(c) = next else { break };
            let p = &self.rows[self.pivot_row[&c]];
            let pc = p.get(c);
            let vc = v.get(c);
            let g = int_gcd(&pc, &vc);
            let a = &pc / &g;
            let b = &vc / &g;
            let mut w = v.scaled(&a);
            w.add_scaled(p, &(-&b));
            v = primitive(&w);
            cursor = c + 1;
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Add `v`; returns whether it was independent of the rows already present.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        match r.leading() {
            None => false,
            Some((c, _)) => {
                self.pivot_row.insert(c, self.rows.len());
                self.rows.push(r);
                true
            }
        }
    }

    /// Reduced row echelon form: `(pivot column, row)` sorted by pivot, pivot entries 1.
    pub fn rref(&self) -> Vec<(usize, SparseVec)> {
        let mut out: Vec<(usize, SparseVec)> =
            self.pivot_row.iter().map(|(c, r)| (*c, self.rows[*r].clone())).collect();
        for i in (0..out.len()).rev() {
            let (p, row) = &out[i];
            let inv = row.get(*p).recip();
            let row = row.scaled(&inv);
            let p = *p;
            for (_, above) in out.iter_mut().take(i) {
                let c = above.get(p);
                if !c.is_zero() {
                    above.add_scaled(&row, &(-&c));
                }
            }
            out[i].1 = row;
        }
        out
    }
}

pub fn rank(rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn rref(rows: &[SparseVec]) -> Vec<(usize, SparseVec)> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rref()
}

/// Null space of the matrix with the given rows and `n_cols` columns.
pub fn null_space(rows: &[SparseVec], n_cols: usize) -> Vec<SparseVec> {
    let r = rref(rows);
    let pivots: BTreeMap<usize, &SparseVec> = r.iter().map(|(p, row)| (*p, row)).collect();
    let mut out = Vec::new();
    for f in 0..n_cols {
        if pivots.contains_key(&f) {
            continue;
        }
        let mut v = SparseVec::unit(f);
        for (p, row) in &pivots {
            let c = row.get(f);
            if !c.is_zero() {
                v.set(*p, -&c);
            }
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(&xs.iter().map(|x| Rat::from_int(*x)).collect::<Vec<_>>())
    }

    #[test]
    fn primitive_clears_content() {
        let p = primitive(&SparseVec::from_pairs([(0, Rat::new(-1, 2)), (3, Rat::new(3, 4))]));
        assert_eq!(p, SparseVec::from_pairs([(0, Rat::from_int(2)), (3, Rat::from_int(-3))]));
    }

    #[test]
    fn insert_detects_dependence() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[1, 2, 0])));
        assert!(e.insert(&v(&[0, 1, 1])));
        assert!(!e.insert(&v(&[2, 5, 1])));
        assert!(e.insert(&v(&[0, 0, 7])));
        assert_eq!(e.rank(), 3);
    }

    #[test]
    fn rref_is_reduced() {
        let r = rref(&[v(&[2, 4, 2]), v(&[1, 3, 0])]);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].1, SparseVec::from_pairs([(0, Rat::one()), (2, Rat::from_int(3))]));
        assert_eq!(r[1].1, SparseVec::from_pairs([(1, Rat::one()), (2, Rat::from_int(-1))]));
    }
}
