// SPDX-License-Identifier: Apache-2.0
//! Quillen chains `𝒞(L) = (Λ sL, d₁ + d₂)` on a truncated dgl, capped in word length.

use std::collections::BTreeMap;

use super::coalgebra::Cdgc;
use crate::dgl::Dgl;
use crate::error::{Error, Result};
use crate::exactlin::SparseVec;
use crate::freelie::LieElement;
use crate::limits::check_basis_size;
use crate::rat::Rat;

/// `𝒞(L)` restricted to wedge words of length at most `word_cap`, which is a
/// sub-coalgebra and a subcomplex (`d₂` only shortens words).
#[derive(Clone, Debug)]
pub struct Chains {
    pub cdgc: Cdgc,
    pub word_cap: usize,
    /// Basis of sL: `(degree of the element in L, index in that degree's basis)`.
    pub suspended: Vec<(i64, usize)>,
    /// The wedge word of each coalgebra basis element, as sorted indices into `suspended`.
    pub words: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    sdeg: Vec<i64>,
}

/// Graded-commutative product of two sorted words with its Koszul sign.
fn wedge_words(sdeg: &[i64], a: &[usize], b: &[usize]) -> Option<(Rat, Vec<usize>)> {
    let odd = |i: usize| sdeg[i] & 1 != 0;
    let mut odd_swaps = 0usize;
    for x in a {
        for y in b {
            if y < x && odd(*x) && odd(*y) {
                odd_swaps += 1;
            }
            if x == y && odd(*x) {
                return None;
            }
        }
    }
    let mut w: Vec<usize> = a.iter().chain(b).copied().collect();
    w.sort_unstable();
    Some((Rat::sign(odd_swaps as i64), w))
}

struct Builder<'a> {
    sdeg: Vec<i64>,
    elems: Vec<LieElement>,
    /// `(L degree, index)` → position in the sL basis.
    locate: BTreeMap<(i64, usize), usize>,
    index: &'a BTreeMap<Vec<usize>, usize>,
}

impl Builder<'_> {
    fn wedge(&self, a: &[usize], b: &[usize]) -> Option<(Rat, Vec<usize>)> {
        wedge_words(&self.sdeg, a, b)
    }

    /// Coordinates of `s(e)` for `e` homogeneous in L.
    fn suspend(&self, e: &LieElement, l: &Dgl) -> Result<Vec<(usize, Rat)>> {
        let Some(n) = e.degree() else { return Ok(Vec::new()) };
        let coords = l.lie().graded_basis(n).coordinates(e)?;
        Ok(coords.iter().map(|(j, c)| (self.locate[&(n, j)], c.clone())).collect())
    }

    fn push(&self, out: &mut SparseVec, word: &[usize], c: &Rat) -> Result<()> {
        match self.index.get(word) {
            Some(i) => {
                out.add_at(*i, c);
                Ok(())
            }
            None => Err(Error::Internal(format!("word {word:?} leaves the word-capped basis"))),
        }
    }

    fn differential(&self, word: &[usize], l: &Dgl) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        // d₁: the coderivation extending sx ↦ −s dx.
        let mut passed = 0i64;
        for i in 0..word.len() {
            let dx = l.differential(&self.elems[word[i]]);
            for (t, c) in self.suspend(&dx, l)? {
                if let Some((s1, w1)) = self.wedge(&word[..i], &[t]) {
                    if let Some((s2, w2)) = self.wedge(&w1, &word[i + 1..]) {
                        let coeff = -&(&(&c * &s1) * &s2) * &Rat::sign(passed);
                        self.push(&mut out, &w2, &coeff)?;
                    }
                }
            }
            passed += self.sdeg[word[i]];
        }
        // d₂: sx_i ∧ sx_j ∧ rest ↦ (−1)^{|sx_i|} s[x_i, x_j] ∧ rest.
        for i in 0..word.len() {
            for j in (i + 1)..word.len() {
                let before_i: i64 = word[..i].iter().map(|t| self.sdeg[*t]).sum();
                let between: i64 = word[..j].iter().enumerate().filter(|(k, _)| *k != i).map(|(_, t)| self.sdeg[*t]).sum();
                let eps = Rat::sign(self.sdeg[word[i]] * before_i + self.sdeg[word[j]] * between);
                let rest: Vec<usize> = word.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, t)| *t).collect();
                let br = self.elems[word[i]].bracket(&self.elems[word[j]]);
                let coeff = &eps * &Rat::sign(self.sdeg[word[i]]);
                for (t, c) in self.suspend(&br, l)? {
                    if let Some((s, w)) = self.wedge(&[t], &rest) {
                        self.push(&mut out, &w, &(&(&c * &s) * &coeff))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Shuffle coproduct: split the word by every subset of positions.
    fn coproduct(&self, word: &[usize]) -> Vec<(usize, usize, Rat)> {
        let k = word.len();
        let mut acc: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for mask in 0u32..(1 << k) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut swaps = 0i64;
            for (p, t) in word.iter().enumerate() {
                if mask & (1 << p) != 0 {
                    // Moves past every earlier element that went right.
                    swaps += right.iter().map(|r: &usize| self.sdeg[*r] * self.sdeg[*t]).sum::<i64>();
                    left.push(*t);
                } else {
                    right.push(*t);
                }
            }
            let key = (self.index[&left], self.index[&right]);
            *acc.entry(key).or_default() += &Rat::sign(swaps);
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (a, b, c)).collect()
    }
}

impl Chains {
    pub fn build(l: &Dgl, word_cap: usize) -> Result<Chains> {
        let lie = l.lie();
        let mut suspended = Vec::new();
        let mut sdeg = Vec::new();
        let mut elems = Vec::new();
        let mut labels_s = Vec::new();
        if let Some((lo, hi)) = lie.degree_span() {
            for n in lo..=hi {
                let gb = lie.graded_basis(n);
                check_basis_size(n, gb.dim())?;
                for j in 0..gb.dim() {
                    suspended.push((n, j));
                    sdeg.push(n + 1);
                    elems.push(gb.element(j));
                    labels_s.push(format!("s{}", gb.label(j)));
                }
            }
        }
        let locate: BTreeMap<(i64, usize), usize> = suspended.iter().enumerate().map(|(i, k)| (*k, i)).collect();

        // Wedge words: sorted index lists, odd entries not repeated.
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..word_cap {
            let mut next = Vec::new();
            for w in &frontier {
                let start = w.last().copied().unwrap_or(0);
                for (t, deg) in sdeg.iter().enumerate().skip(start) {
                    if w.last() == Some(&t) && deg & 1 != 0 {
                        continue;
                    }
                    let mut nw = w.clone();
                    nw.push(t);
                    next.push(nw);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
            check_basis_size(0, words.len())?;
        }
        let index: BTreeMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let b = Builder { sdeg: sdeg.clone(), elems, locate, index: &index };

        let labels = words
            .iter()
            .map(|w| if w.is_empty() { "1".to_string() } else { w.iter().map(|t| labels_s[*t].clone()).collect::<Vec<_>>().join("∧") })
            .collect();
        let degrees = words.iter().map(|w| w.iter().map(|t| sdeg[*t]).sum()).collect();
        let comul = words.iter().map(|w| b.coproduct(w)).collect();
        let diff = words.iter().map(|w| b.differential(w, l)).collect::<Result<Vec<_>>>()?;
        let cdgc = Cdgc {
            labels,
            degrees,
            unit: 0,
            comul,
            diff,
            meta: vec![("word_cap".into(), word_cap.to_string()), ("cap".into(), l.cap().to_string())],
        };
        Ok(Chains { cdgc, word_cap, suspended, words, index, sdeg })
    }

    /// Product of two wedge words, `None` when it vanishes.
    pub fn wedge(&self, a: &[usize], b: &[usize]) -> Option<(Rat, Vec<usize>)> {
        wedge_words(&self.sdeg, a, b)
    }

    /// Position in the sL basis of an element given by L degree and basis index.
    pub fn suspended_index(&self, degree: i64, j: usize) -> Option<usize> {
        self.suspended.iter().position(|k| *k == (degree, j))
    }

    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Basis indices of the word-length-1 elements `sx`, with the corresponding `x`.
    pub fn generators_of_length_one(&self, l: &Dgl) -> Vec<(usize, LieElement)> {
        self.suspended
            .iter()
            .enumerate()
            .map(|(t, (n, j))| (self.index[&vec![t]], l.lie().graded_basis(*n).element(*j)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgl::builtins;

    #[test]
    fn odd_sphere_chains() {
        let l = builtins::sphere(3, 5).unwrap();
        let c = Chains::build(&l, 4).unwrap();
        assert_eq!(c.cdgc.labels, vec!["1", "sx"]);
        c.cdgc.verify().unwrap();
    }

    #[test]
    fn even_sphere_chains_are_a_dg_coalgebra() {
        let l = builtins::sphere(2, 4).unwrap();
        let c = Chains::build(&l, 4).unwrap();
        c.cdgc.verify().unwrap();
        // sx is even, s[x,x] odd: words sxᵏ (k ≤ 4) and sxᵏ∧s[x,x] (k ≤ 3), plus 1.
        assert_eq!(c.cdgc.dim(), 9);
        // d₂(sx∧sx) = (−1)^{|sx|} s[x,x] = s[x,x].
        let xx = c.index_of(&[0, 0]).unwrap();
        let sxx = c.index_of(&[1]).unwrap();
        assert_eq!(c.cdgc.diff[xx], SparseVec::unit(sxx));
    }

    #[test]
    fn circle_chains_verify() {
        let l = builtins::circle(3).unwrap();
        let c = Chains::build(&l, 3).unwrap();
        c.cdgc.verify().unwrap();
    }

    #[test]
    fn wedge_chains_verify() {
        let l = builtins::wedge(&[2, 3], 3).unwrap();
        let c = Chains::build(&l, 3).unwrap();
        c.cdgc.verify().unwrap();
    }
}
