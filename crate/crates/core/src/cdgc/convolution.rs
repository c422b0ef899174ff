// SPDX-License-Identifier: Apache-2.0
//! Convolution dgl `Hom(C, L)` with value-table elements.

use super::chains::Chains;
use super::coalgebra::Cdgc;
use crate::dgl::{Dgl, DglMorphism};
use crate::error::{Error, Result};
use crate::exactlin::{GradedChainComplex, SparseMat, SparseVec};
use crate::freelie::LieElement;
use crate::limits::check_basis_size;
use crate::rat::Rat;

/// Sign of the universal MC element on word-length-one chains: `q(sx) = −x`.
///
/// With `d₂(sv∧sw) = (−1)^{|sv|}s[v,w]` and the Koszul-signed convolution bracket,
/// `q(sx) = x` leaves the residue `2(−1)^{|sv|}[v,w]` on `sv∧sw`.
pub const UNIVERSAL_MC_SIGN: i64 = -1;

/// Linear map `C → L` of a fixed degree, stored as its values on the basis of `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    pub degree: i64,
    pub values: Vec<LieElement>,
}

impl HomElement {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &HomElement) -> HomElement {
        HomElement { degree: self.degree, values: self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &HomElement) -> HomElement {
        HomElement { degree: self.degree, values: self.values.iter().zip(&other.values).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Rat) -> HomElement {
        HomElement { degree: self.degree, values: self.values.iter().map(|a| a.scale(c)).collect() }
    }
}

/// `Hom(C, L)`, or `Hom(C̄, L)` when `reduced`.
#[derive(Clone, Debug)]
pub struct Convolution {
    pub coalgebra: Cdgc,
    pub target: Dgl,
    pub reduced: bool,
}

impl Convolution {
    pub fn new(coalgebra: Cdgc, target: Dgl, reduced: bool) -> Convolution {
        Convolution { coalgebra, target, reduced }
    }

    fn slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.coalgebra.dim()).filter(move |i| !(self.reduced && *i == self.coalgebra.unit))
    }

    pub fn zero(&self, degree: i64) -> HomElement {
        HomElement { degree, values: vec![LieElement::zero(self.target.lie()); self.coalgebra.dim()] }
    }

    /// The map `c ↦ e` on one basis element, zero elsewhere.
    pub fn elementary(&self, slot: usize, e: LieElement) -> Result<HomElement> {
        let Some(n) = e.degree() else { return Err(Error::Degree("elementary maps need a homogeneous value".into())) };
        let mut f = self.zero(n - self.coalgebra.degrees[slot]);
        f.values[slot] = e;
        Ok(f)
    }

    /// `[f,g](c) = Σ (−1)^{|g||c′|} [f(c′), g(c″)]` over `Δc = Σ c′⊗c″`.
    pub fn bracket(&self, f: &HomElement, g: &HomElement) -> HomElement {
        let mut out = self.zero(f.degree + g.degree);
        for i in self.slots() {
            let mut acc = LieElement::zero(self.target.lie());
            for (a, b, c) in &self.coalgebra.comul[i] {
                let (fa, gb) = (&f.values[*a], &g.values[*b]);
                if fa.is_zero() || gb.is_zero() {
                    continue;
                }
                let s = Rat::sign(g.degree * self.coalgebra.degrees[*a]);
                acc.add_scaled(&fa.bracket(gb), &(c * &s));
            }
            out.values[i] = acc;
        }
        out
    }

    /// `Df = d∘f − (−1)^{|f|} f∘d`
    pub fn differential(&self, f: &HomElement) -> HomElement {
        let mut out = self.zero(f.degree - 1);
        let s = Rat::sign(f.degree);
        for i in self.slots() {
            let mut v = self.target.differential(&f.values[i]);
            for (j, c) in self.coalgebra.diff[i].iter() {
                if !(self.reduced && j == self.coalgebra.unit) {
                    v.add_scaled(&f.values[j], &-&(c * &s));
                }
            }
            out.values[i] = v;
        }
        out
    }

    /// `D_m f = Df + [m, f]`
    pub fn twisted_differential(&self, m: &HomElement, f: &HomElement) -> HomElement {
        self.differential(f).add(&self.bracket(m, f))
    }

    pub fn check_mc(&self, m: &HomElement) -> HomElement {
        self.differential(m).add(&self.bracket(m, m).scale(&Rat::new(1, 2)))
    }

    /// Degrees where Hom can be nonzero.
    pub fn degree_span(&self) -> Option<(i64, i64)> {
        let (lo, hi) = self.target.lie().degree_span()?;
        let ds: Vec<i64> = self.slots().map(|i| self.coalgebra.degrees[i]).collect();
        if ds.is_empty() {
            return None;
        }
        Some((lo - ds.iter().max().expect("nonempty"), hi - ds.iter().min().expect("nonempty")))
    }

    /// Basis of degree `n`: `(slot, index in the L basis of degree |c|+n)`.
    pub fn basis(&self, n: i64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in self.slots() {
            let dim = self.target.lie().dim(self.coalgebra.degrees[i] + n);
            out.extend((0..dim).map(|j| (i, j)));
        }
        out
    }

    pub fn basis_element(&self, n: i64, k: (usize, usize)) -> HomElement {
        let (i, j) = k;
        let e = self.target.lie().graded_basis(self.coalgebra.degrees[i] + n).element(j);
        let mut f = self.zero(n);
        f.values[i] = e;
        f
    }

    pub fn labels(&self, n: i64) -> Vec<String> {
        self.basis(n)
            .into_iter()
            .map(|(i, j)| {
                let e = self.target.lie().graded_basis(self.coalgebra.degrees[i] + n).label(j);
                format!("({}↦{})", self.coalgebra.labels[i], e)
            })
            .collect()
    }

    pub fn coordinates(&self, f: &HomElement) -> Result<SparseVec> {
        let n = f.degree;
        let mut out = SparseVec::new();
        let mut offset = 0;
        for i in self.slots() {
            let gb = self.target.lie().graded_basis(self.coalgebra.degrees[i] + n);
            if !f.values[i].is_zero() {
                let c = gb.coordinates(&f.values[i])?;
                for (j, x) in c.iter() {
                    out.set(offset + j, x.clone());
                }
            }
            offset += gb.dim();
        }
        Ok(out)
    }

    pub fn combine(&self, n: i64, v: &SparseVec) -> HomElement {
        let basis = self.basis(n);
        let mut f = self.zero(n);
        for (k, c) in v.iter() {
            f = f.add(&self.basis_element(n, basis[k]).scale(c));
        }
        f
    }

    /// Chain complex in degrees `lo−1 ..= hi+1` for `D` or `D_m`.
    pub fn chain_complex(&self, lo: i64, hi: i64, twist: Option<&HomElement>) -> Result<GradedChainComplex> {
        let Some((a, b)) = self.degree_span() else { return Ok(GradedChainComplex::zero()) };
        let from = (lo - 1).max(a);
        let to = (hi + 1).min(b);
        if from > to {
            return Ok(GradedChainComplex::zero());
        }
        let mut bases = Vec::new();
        let mut boundaries = Vec::new();
        for n in from..=to {
            let basis = self.basis(n);
            check_basis_size(n, basis.len())?;
            bases.push(self.labels(n));
            if n == from {
                boundaries.push(SparseMat::zeros(0, basis.len()));
                continue;
            }
            let rows = self.basis(n - 1).len();
            let cols = basis
                .iter()
                .map(|k| {
                    let f = self.basis_element(n, *k);
                    let df = match twist {
                        Some(m) => self.twisted_differential(m, &f),
                        None => self.differential(&f),
                    };
                    self.coordinates(&df)
                })
                .collect::<Result<Vec<_>>>()?;
            boundaries.push(SparseMat::from_columns(rows, cols)?);
        }
        Ok(GradedChainComplex::new(from, bases, boundaries)?.with_meta("cap", self.target.cap()))
    }

    /// `L ↪ Hom(C, L)`, `x ↦ (1 ↦ x)`.
    pub fn constant(&self, x: &LieElement) -> Result<HomElement> {
        if self.reduced {
            return Err(Error::Usage("constants need the unreduced convolution algebra".into()));
        }
        self.elementary(self.coalgebra.unit, x.clone())
    }
}

/// Universal MC element of `Hom(𝒞(L), L)`: `sx ↦ ±x` on word length one, zero elsewhere.
pub fn universal_mc(chains: &Chains, conv: &Convolution) -> HomElement {
    let mut q = conv.zero(-1);
    for (i, x) in chains.generators_of_length_one(&conv.target) {
        q.values[i] = x.scale(&Rat::from_int(UNIVERSAL_MC_SIGN));
    }
    q
}

/// `φ̄ = φ∘q ∈ Hom(𝒞(L′), L)` for `φ: L′ → L`.
pub fn mc_of_morphism(chains: &Chains, phi: &DglMorphism, conv: &Convolution) -> HomElement {
    let mut m = conv.zero(-1);
    for (i, x) in chains.generators_of_length_one(&phi.source) {
        m.values[i] = phi.apply(&x).scale(&Rat::from_int(UNIVERSAL_MC_SIGN));
    }
    m
}
