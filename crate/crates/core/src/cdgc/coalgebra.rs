// SPDX-License-Identifier: Apache-2.0
//! Finite cocommutative differential graded coalgebras on an explicit basis.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{GradedChainComplex, SparseMat, SparseVec};
use crate::rat::Rat;

/// Coaugmented coalgebra: basis element `unit` is the coaugmentation `1`, the
/// counit is its dual, and every other basis element lies in `ker ε`.
#[derive(Clone, Debug)]
pub struct Cdgc {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub unit: usize,
    /// `Δ(eᵢ) = Σ c · e_a ⊗ e_b` stored as `(a, b, c)`.
    pub comul: Vec<Vec<(usize, usize, Rat)>>,
    /// `d(eᵢ)` in basis coordinates.
    pub diff: Vec<SparseVec>,
    pub meta: Vec<(String, String)>,
}

type Tensor2 = BTreeMap<(usize, usize), Rat>;
type Tensor3 = BTreeMap<(usize, usize, usize), Rat>;

fn add2(t: &mut Tensor2, k: (usize, usize), c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k).or_default();
    *e += &c;
    if e.is_zero() {
        t.remove(&k);
    }
}

fn add3(t: &mut Tensor3, k: (usize, usize, usize), c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k).or_default();
    *e += &c;
    if e.is_zero() {
        t.remove(&k);
    }
}

impl Cdgc {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn coproduct(&self, i: usize) -> Tensor2 {
        let mut t = Tensor2::new();
        for (a, b, c) in &self.comul[i] {
            add2(&mut t, (*a, *b), c.clone());
        }
        t
    }

    /// `Δ̄c = Δc − 1⊗c − c⊗1`
    pub fn reduced_coproduct(&self, i: usize) -> Vec<(usize, usize, Rat)> {
        self.comul[i].iter().filter(|(a, b, _)| *a != self.unit && *b != self.unit).cloned().collect()
    }

    fn bad(msg: String) -> Error {
        Error::IllFormedCoalgebra(msg)
    }

    /// Checks counit, coassociativity, cocommutativity, the coderivation rule and `d² = 0`.
    pub fn verify(&self) -> Result<()> {
        let n = self.dim();
        if self.degrees.len() != n || self.comul.len() != n || self.diff.len() != n || self.unit >= n {
            return Err(Cdgc::bad("inconsistent table sizes".into()));
        }
        if self.degrees[self.unit] != 0 || !self.diff[self.unit].is_zero() {
            return Err(Cdgc::bad("the coaugmentation must be a degree-0 cycle".into()));
        }
        for i in 0..n {
            let delta = self.coproduct(i);
            for (a, b) in delta.keys() {
                if self.degrees[*a] + self.degrees[*b] != self.degrees[i] {
                    return Err(Cdgc::bad(format!("Δ({}) is not homogeneous", self.labels[i])));
                }
            }
            for (j, _) in self.diff[i].iter() {
                if j >= n || self.degrees[j] != self.degrees[i] - 1 {
                    return Err(Cdgc::bad(format!("d({}) has the wrong degree", self.labels[i])));
                }
            }
            // Counit laws.
            let left: SparseVec = SparseVec::from_pairs(delta.iter().filter(|((a, _), _)| *a == self.unit).map(|((_, b), c)| (*b, c.clone())));
            let right: SparseVec = SparseVec::from_pairs(delta.iter().filter(|((_, b), _)| *b == self.unit).map(|((a, _), c)| (*a, c.clone())));
            if left != SparseVec::unit(i) || right != SparseVec::unit(i) {
                return Err(Cdgc::bad(format!("counit law fails on {}", self.labels[i])));
            }
            // Cocommutativity.
            let mut swapped = Tensor2::new();
            for ((a, b), c) in &delta {
                add2(&mut swapped, (*b, *a), c * &Rat::sign(self.degrees[*a] * self.degrees[*b]));
            }
            if swapped != delta {
                return Err(Cdgc::bad(format!("Δ({}) is not graded cocommutative", self.labels[i])));
            }
            // Coassociativity.
            let mut lhs = Tensor3::new();
            let mut rhs = Tensor3::new();
            for ((a, b), c) in &delta {
                for ((p, q), e) in self.coproduct(*a) {
                    add3(&mut lhs, (p, q, *b), c * &e);
                }
                for ((p, q), e) in self.coproduct(*b) {
                    add3(&mut rhs, (*a, p, q), c * &e);
                }
            }
            if lhs != rhs {
                return Err(Cdgc::bad(format!("Δ is not coassociative on {}", self.labels[i])));
            }
            // Coderivation: Δd = (d⊗1 + 1⊗d)Δ.
            let mut dd = Tensor2::new();
            for (j, c) in self.diff[i].iter() {
                for ((a, b), e) in self.coproduct(j) {
                    add2(&mut dd, (a, b), c * &e);
                }
            }
            let mut expected = Tensor2::new();
            for ((a, b), c) in &delta {
                for (p, e) in self.diff[*a].iter() {
                    add2(&mut expected, (p, *b), c * e);
                }
                let s = Rat::sign(self.degrees[*a]);
                for (q, e) in self.diff[*b].iter() {
                    add2(&mut expected, (*a, q), &(c * e) * &s);
                }
            }
            if dd != expected {
                return Err(Cdgc::bad(format!("d is not a coderivation on {}", self.labels[i])));
            }
            // d² = 0.
            let mut d2 = SparseVec::new();
            for (j, c) in self.diff[i].iter() {
                d2.add_scaled(&self.diff[j], c);
            }
            if !d2.is_zero() {
                return Err(Cdgc::bad(format!("d² is nonzero on {}", self.labels[i])));
            }
        }
        Ok(())
    }

    /// Underlying chain complex (the whole coalgebra, `reduced` drops the coaugmentation).
    pub fn chain_complex(&self, reduced: bool) -> Result<GradedChainComplex> {
        let idx: Vec<usize> = (0..self.dim()).filter(|i| !(reduced && *i == self.unit)).collect();
        if idx.is_empty() {
            return Ok(GradedChainComplex::zero());
        }
        let lo = idx.iter().map(|i| self.degrees[*i]).min().expect("nonempty");
        let hi = idx.iter().map(|i| self.degrees[*i]).max().expect("nonempty");
        let by_degree: Vec<Vec<usize>> = (lo..=hi).map(|n| idx.iter().copied().filter(|i| self.degrees[*i] == n).collect()).collect();
        let mut bases = Vec::new();
        let mut boundaries = Vec::new();
        for (k, cur) in by_degree.iter().enumerate() {
            bases.push(cur.iter().map(|i| self.labels[*i].clone()).collect());
            if k == 0 {
                boundaries.push(SparseMat::zeros(0, cur.len()));
                continue;
            }
            let below = &by_degree[k - 1];
            let pos: BTreeMap<usize, usize> = below.iter().enumerate().map(|(p, i)| (*i, p)).collect();
            let cols = cur
                .iter()
                .map(|i| SparseVec::from_pairs(self.diff[*i].iter().filter_map(|(j, c)| pos.get(&j).map(|p| (*p, c.clone())))))
                .collect();
            boundaries.push(SparseMat::from_columns(below.len(), cols)?);
        }
        GradedChainComplex::new(lo, bases, boundaries)
    }
}
