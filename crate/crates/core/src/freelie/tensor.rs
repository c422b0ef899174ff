// SPDX-License-Identifier: Apache-2.0
//! Truncated tensor algebra on a graded alphabet.

use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::rat::Rat;

pub type Letter = u16;
pub type Word = SmallVec<[Letter; 8]>;

/// Finite linear combination of words (the empty word is the unit).
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct Tensor {
    terms: BTreeMap<Word, Rat>,
}

/// Parity of the degree of `w` under the letter degrees `degs`.
#[inline]
pub fn word_parity(w: &[Letter], degs: &[i64]) -> bool {
    w.iter().fold(false, |p, l| p ^ (degs[*l as usize] & 1 != 0))
}

#[inline]
pub fn word_degree(w: &[Letter], degs: &[i64]) -> i64 {
    w.iter().map(|l| degs[*l as usize]).sum()
}

impl Tensor {
    pub fn zero() -> Tensor {
        Tensor::default()
    }

    pub fn unit() -> Tensor {
        Tensor::monomial(Word::new(), Rat::one())
    }

    pub fn letter(l: Letter) -> Tensor {
        Tensor::monomial(smallvec::smallvec![l], Rat::one())
    }

    pub fn monomial(w: Word, c: Rat) -> Tensor {
        let mut t = Tensor::zero();
        t.add_term(w, &c);
        t
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

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[Letter]) -> Rat {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: &Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), &(x * c));
        }
    }

    pub fn scaled(&self, c: &Rat) -> Tensor {
        if c.is_zero() {
            return Tensor::zero();
        }
        Tensor { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    /// Drops words longer than `cap`; returns whether anything was dropped.
    pub fn truncate(&mut self, cap: usize) -> bool {
        let before = self.terms.len();
        self.terms.retain(|w, _| w.len() <= cap);
        before != self.terms.len()
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> Tensor {
        Tensor { terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Concatenation product, dropping words longer than `cap`.
    pub fn mul(&self, other: &Tensor, cap: usize) -> (Tensor, bool) {
        let mut out = Tensor::zero();
        let mut dropped = false;
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.len() + b.len() > cap {
                    dropped = true;
                    continue;
                }
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, &(x * y));
            }
        }
        (out, dropped)
    }

    /// Graded commutator `ab − (−1)^{|a||b|} ba`, bilinear over homogeneous words.
    pub fn bracket(&self, other: &Tensor, degs: &[i64], cap: usize) -> (Tensor, bool) {
        let mut out = Tensor::zero();
        let mut dropped = false;
        for (a, x) in &self.terms {
            let pa = word_parity(a, degs);
            for (b, y) in &other.terms {
                if a.len() + b.len() > cap {
                    dropped = true;
                    continue;
                }
                let c = x * y;
                let mut ab = a.clone();
                ab.extend_from_slice(b);
                out.add_term(ab, &c);
                let mut ba = b.clone();
                ba.extend_from_slice(a);
                if pa && word_parity(b, degs) {
                    out.add_term(ba, &c);
                } else {
                    out.add_term(ba, &(-&c));
                }
            }
        }
        (out, dropped)
    }

    /// Image under the algebra map sending each letter `l` to `images[l]`.
    pub fn substitute(&self, images: &[Tensor], cap: usize) -> (Tensor, bool) {
        let mut out = Tensor::zero();
        let mut dropped = false;
        for (w, c) in &self.terms {
            let mut acc = Tensor::unit();
            for l in w.iter() {
                let (next, d) = acc.mul(&images[*l as usize], cap);
                dropped |= d;
                acc = next;
                if acc.is_zero() {
                    break;
                }
            }
            out.add_scaled(&acc, c);
        }
        (out, dropped)
    }

    /// Apply the degree-`k` twisted derivation with letter values `theta`, over the
    /// algebra map with letter images `base` (`None` = identity).
    ///
    /// θ(w₁…wₙ) = Σᵢ (−1)^{k(|w₁|+…+|wᵢ₋₁|)} f(w₁…wᵢ₋₁) θ(wᵢ) f(wᵢ₊₁…wₙ)
    pub fn apply_derivation(
        &self,
        theta: &[Tensor],
        k: i64,
        base: Option<&[Tensor]>,
        degs: &[i64],
        cap: usize,
    ) -> (Tensor, bool) {
        let mut out = Tensor::zero();
        let mut dropped = false;
        let odd_k = k & 1 != 0;
        for (w, c) in &self.terms {
            let mut parity = false;
            for i in 0..w.len() {
                let val = &theta[w[i] as usize];
                if !val.is_zero() {
                    let coeff = if odd_k && parity { -c } else { c.clone() };
                    match base {
                        None => {
                            let (pre, suf) = (&w[..i], &w[i + 1..]);
                            for (m, y) in val.iter() {
                                if pre.len() + m.len() + suf.len() > cap {
                                    dropped = true;
                                    continue;
                                }
                                let mut nw: Word = Word::with_capacity(pre.len() + m.len() + suf.len());
                                nw.extend_from_slice(pre);
                                nw.extend_from_slice(m);
                                nw.extend_from_slice(suf);
                                out.add_term(nw, &(y * &coeff));
                            }
                        }
                        Some(images) => {
                            let mut acc = Tensor::unit();
                            for l in &w[..i] {
                                let (n, d) = acc.mul(&images[*l as usize], cap);
                                dropped |= d;
                                acc = n;
                            }
                            let (n, d) = acc.mul(val, cap);
                            dropped |= d;
                            acc = n;
                            for l in &w[i + 1..] {
                                let (n, d) = acc.mul(&images[*l as usize], cap);
                                dropped |= d;
                                acc = n;
                            }
                            out.add_scaled(&acc, &coeff);
                        }
                    }
                }
                parity ^= degs[w[i] as usize] & 1 != 0;
            }
        }
        (out, dropped)
    }

    /// Left-normed bracketing `[[…[w₁,w₂],…],wₙ]` applied termwise.
    pub fn dynkin(&self, degs: &[i64]) -> Tensor {
        let mut out = Tensor::zero();
        for (w, c) in &self.terms {
            if w.is_empty() {
                continue;
            }
            let mut acc = Tensor::letter(w[0]);
            for l in &w[1..] {
                acc = acc.bracket(&Tensor::letter(*l), degs, usize::MAX).0;
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// Homogeneous component of word length `n`.
    pub fn length_component(&self, n: usize) -> Tensor {
        self.filter(|w| w.len() == n)
    }

    /// Whether every length component `P_n` satisfies `dynkin(P_n) = n·P_n`, i.e. lies in the free Lie algebra.
    pub fn is_lie(&self, degs: &[i64]) -> bool {
        if !self.coeff(&[]).is_zero() {
            return false;
        }
        let lengths: std::collections::BTreeSet<usize> = self.terms.keys().map(|w| w.len()).collect();
        lengths.into_iter().all(|n| {
            let p = self.length_component(n);
            p.dynkin(degs) == p.scaled(&Rat::from_int(n as i64))
        })
    }
}
