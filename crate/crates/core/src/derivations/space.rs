// SPDX-License-Identifier: Apache-2.0
//! Derivations `Der L` and φ-derivations `Der_φ(L′, L)` as value tables on generators.

use std::collections::BTreeMap;

use crate::dgl::{Derivation, Dgl, DglMorphism};
use crate::error::{Error, Result};
use crate::exactlin::{solve_linear, GradedChainComplex, SparseMat, SparseVec};
use crate::freelie::{FreeLie, LieElement};
use crate::limits::check_basis_size;
use crate::rat::Rat;

/// Builds a complex on degrees `from..=to` from per-degree labels and boundary columns.
///
/// `column(n, k)` is the boundary of the k-th basis element of degree n in the basis
/// of degree n − 1. The boundary out of degree `from` is dropped.
pub(crate) fn assemble(
    from: i64,
    to: i64,
    labels: impl Fn(i64) -> Vec<String>,
    column: impl Fn(i64, usize) -> Result<SparseVec>,
) -> Result<GradedChainComplex> {
    if from > to {
        return Ok(GradedChainComplex::zero());
    }
    let mut bases: Vec<Vec<String>> = Vec::new();
    let mut boundaries = Vec::new();
    for n in from..=to {
        let b = labels(n);
        check_basis_size(n, b.len())?;
        if n == from {
            boundaries.push(SparseMat::zeros(0, b.len()));
        } else {
            let rows = bases.last().map_or(0, |p| p.len());
            let cols = (0..b.len()).map(|k| column(n, k)).collect::<Result<Vec<_>>>()?;
            boundaries.push(SparseMat::from_columns(rows, cols)?);
        }
        bases.push(b);
    }
    GradedChainComplex::new(from, bases, boundaries)
}

/// `Der_φ(L′, L)`: maps `θ` of degree n with `θ[a,b] = [θa, φb] + (−1)^{n|a|}[φa, θb]`.
///
/// With no base morphism this is `Der L` and carries the commutator bracket.
#[derive(Clone, Debug)]
pub struct DerSpace {
    source: Dgl,
    target: Dgl,
    base: Option<Vec<LieElement>>,
}

impl DerSpace {
    pub fn of(l: &Dgl) -> DerSpace {
        DerSpace { source: l.clone(), target: l.clone(), base: None }
    }

    pub fn along(phi: &DglMorphism) -> DerSpace {
        DerSpace { source: phi.source.clone(), target: phi.target.clone(), base: Some(phi.images.clone()) }
    }

    pub fn source(&self) -> &Dgl {
        &self.source
    }

    pub fn target(&self) -> &Dgl {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.base.is_none()
    }

    /// `φ(gᵢ)`
    pub fn base_image(&self, i: usize) -> LieElement {
        match &self.base {
            Some(b) => b[i].clone(),
            None => LieElement::generator(self.target.lie(), i),
        }
    }

    pub fn base_apply(&self, e: &LieElement) -> LieElement {
        match &self.base {
            Some(b) => e.substitute(b, self.target.lie()),
            None => e.clone(),
        }
    }

    pub fn zero(&self, n: i64) -> Derivation {
        Derivation { degree: n, values: vec![LieElement::zero(self.target.lie()); self.source.lie().rank()] }
    }

    pub fn apply(&self, theta: &Derivation, e: &LieElement) -> LieElement {
        e.apply_derivation(&theta.values, theta.degree, self.base.as_deref(), self.target.lie())
    }

    /// `Dθ = d∘θ − (−1)^{|θ|} θ∘d`
    pub fn boundary(&self, theta: &Derivation) -> Derivation {
        let s = Rat::sign(theta.degree);
        let values = theta
            .values
            .iter()
            .zip(self.source.d_on_gens())
            .map(|(v, dg)| self.target.differential(v).sub(&self.apply(theta, dg).scale(&s)))
            .collect();
        Derivation { degree: theta.degree - 1, values }
    }

    /// Commutator bracket, only on `Der L`.
    pub fn bracket(&self, a: &Derivation, b: &Derivation) -> Result<Derivation> {
        if !self.is_identity() {
            return Err(Error::Usage("φ-derivations carry no bracket".into()));
        }
        Ok(a.bracket(b))
    }

    /// `ad_x∘φ`: `g ↦ [x, φ(g)]`.
    pub fn ad(&self, x: &LieElement) -> Result<Derivation> {
        let Some(n) = x.degree() else { return Ok(self.zero(0)) };
        if !x.is_of_degree(n) {
            return Err(Error::Degree("ad needs a homogeneous element".into()));
        }
        let values = (0..self.source.lie().rank()).map(|i| x.bracket(&self.base_image(i))).collect();
        Ok(Derivation { degree: n, values })
    }

    /// Degrees where `Der_n` can be nonzero.
    pub fn degree_span(&self) -> Option<(i64, i64)> {
        let (lo, hi) = self.target.lie().degree_span()?;
        let degs = self.source.lie().degs();
        let (gmin, gmax) = (degs.iter().min()?, degs.iter().max()?);
        Some((lo - gmax, hi - gmin))
    }

    /// Basis of `Der_n`: `(generator, index in the target basis of degree |g| + n)`.
    pub fn basis(&self, n: i64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, g) in self.source.gens().iter().enumerate() {
            let dim = self.target.lie().dim(g.degree + n);
            out.extend((0..dim).map(|j| (i, j)));
        }
        out
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis(n).len()
    }

    pub fn basis_element(&self, n: i64, k: (usize, usize)) -> Derivation {
        let (i, j) = k;
        let mut theta = self.zero(n);
        theta.values[i] = self.target.lie().graded_basis(self.source.gens()[i].degree + n).element(j);
        theta
    }

    pub fn basis_elements(&self, n: i64) -> Vec<Derivation> {
        self.basis(n).into_iter().map(|k| self.basis_element(n, k)).collect()
    }

    pub fn labels(&self, n: i64) -> Vec<String> {
        self.basis(n)
            .into_iter()
            .map(|(i, j)| {
                let g = &self.source.gens()[i];
                format!("({}↦{})", g.name, self.target.lie().graded_basis(g.degree + n).label(j))
            })
            .collect()
    }

    pub fn coordinates(&self, theta: &Derivation) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        let mut offset = 0;
        for (i, g) in self.source.gens().iter().enumerate() {
            let gb = self.target.lie().graded_basis(g.degree + theta.degree);
            if !theta.values[i].is_zero() {
                for (j, c) in gb.coordinates(&theta.values[i])?.iter() {
                    out.set(offset + j, c.clone());
                }
            }
            offset += gb.dim();
        }
        Ok(out)
    }

    pub fn combine(&self, n: i64, v: &SparseVec) -> Derivation {
        let basis = self.basis(n);
        let mut theta = self.zero(n);
        for (k, c) in v.iter() {
            theta = theta.add(&self.basis_element(n, basis[k]).scale(c));
        }
        theta
    }

    /// Matrix of `D: Der_n → Der_{n−1}`.
    pub fn boundary_matrix(&self, n: i64) -> Result<SparseMat> {
        let cols = self.basis_elements(n).iter().map(|t| self.coordinates(&self.boundary(t))).collect::<Result<Vec<_>>>()?;
        SparseMat::from_columns(self.dim(n - 1), cols)
    }

    /// Matrix of `ad: L_n → Der_n`, `x ↦ ad_x∘φ`.
    pub fn ad_matrix(&self, n: i64) -> Result<SparseMat> {
        let gb = self.target.lie().graded_basis(n);
        let cols = (0..gb.dim()).map(|j| self.coordinates(&self.ad(&gb.element(j))?)).collect::<Result<Vec<_>>>()?;
        SparseMat::from_columns(self.dim(n), cols)
    }
}

/// A graded subspace of `Der_φ(L′, L)` on a degree window, with `D` restricted to it.
///
/// Degrees listed in `restricted` use the given spanning derivations (linearly
/// independent coordinate vectors); the others use the full `Der_n`.
#[derive(Clone, Debug)]
pub struct DerComplex {
    pub space: DerSpace,
    pub from: i64,
    pub to: i64,
    restricted: BTreeMap<i64, Vec<SparseVec>>,
}

impl DerComplex {
    pub fn full(space: DerSpace, from: i64, to: i64) -> DerComplex {
        DerComplex { space, from, to, restricted: BTreeMap::new() }
    }

    /// Replaces degree `n` by the span of `basis` (coordinates in `Der_n`).
    pub fn restrict(mut self, n: i64, basis: Vec<SparseVec>) -> DerComplex {
        self.restricted.insert(n, basis);
        self
    }

    pub fn restriction(&self, n: i64) -> Option<&[SparseVec]> {
        self.restricted.get(&n).map(|v| v.as_slice())
    }

    pub fn dim(&self, n: i64) -> usize {
        if n < self.from || n > self.to {
            return 0;
        }
        match self.restricted.get(&n) {
            Some(b) => b.len(),
            None => self.space.dim(n),
        }
    }

    pub fn element(&self, n: i64, k: usize) -> Derivation {
        match self.restricted.get(&n) {
            Some(b) => self.space.combine(n, &b[k]),
            None => self.space.basis_element(n, self.space.basis(n)[k]),
        }
    }

    pub fn elements(&self, n: i64) -> Vec<Derivation> {
        (0..self.dim(n)).map(|k| self.element(n, k)).collect()
    }

    pub fn labels(&self, n: i64) -> Vec<String> {
        if n < self.from || n > self.to {
            return Vec::new();
        }
        match self.restricted.get(&n) {
            Some(b) => {
                let full = self.space.labels(n);
                b.iter().map(|v| crate::exactlin::describe_combination(&full, v)).collect()
            }
            None => self.space.labels(n),
        }
    }

    /// Coordinates in this complex's degree-n basis; fails outside the subspace.
    pub fn coordinates(&self, theta: &Derivation) -> Result<SparseVec> {
        let n = theta.degree;
        if n < self.from || n > self.to {
            return if theta.is_zero() { Ok(SparseVec::new()) } else { Err(Error::NotInSpan) };
        }
        let v = self.space.coordinates(theta)?;
        match self.restricted.get(&n) {
            Some(b) => {
                let m = SparseMat::from_columns(self.space.dim(n), b.clone())?;
                solve_linear(&m, &v)?.ok_or(Error::NotInSpan)
            }
            None => Ok(v),
        }
    }

    pub fn combine(&self, n: i64, v: &SparseVec) -> Derivation {
        let mut theta = self.space.zero(n);
        for (k, c) in v.iter() {
            theta = theta.add(&self.element(n, k).scale(c));
        }
        theta
    }

    pub fn chain_complex(&self) -> Result<GradedChainComplex> {
        let c = assemble(
            self.from,
            self.to,
            |n| self.labels(n),
            |n, k| {
                let d = self.space.boundary(&self.element(n, k));
                self.coordinates(&d).map_err(|_| Error::InvalidSubgroup(format!("D leaves the subspace in degree {}", n - 1)))
            },
        )?;
        Ok(c.with_meta("cap", self.space.target().cap()))
    }
}

/// `Der_φ(L′, L)` on degrees `from..=to`, clipped to where it can be nonzero.
pub fn der_complex(source: &Dgl, target: &Dgl, phi: Option<&DglMorphism>, from: i64, to: i64) -> Result<DerComplex> {
    let space = match phi {
        Some(f) => {
            if !FreeLie::same_algebra(f.source.lie(), source.lie()) || !FreeLie::same_algebra(f.target.lie(), target.lie()) {
                return Err(Error::Shape("φ does not match the given source and target".into()));
            }
            DerSpace::along(f)
        }
        None => {
            if !FreeLie::same_algebra(source.lie(), target.lie()) {
                return Err(Error::Usage("derivations without φ need source = target".into()));
            }
            DerSpace::of(target)
        }
    };
    Ok(DerComplex::full(space, from, to))
}
