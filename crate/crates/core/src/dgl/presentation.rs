// SPDX-License-Identifier: Apache-2.0
//! Free truncated dgl's, their morphisms and derivations.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::{GradedChainComplex, SparseMat, SparseVec};
use crate::freelie::{FreeLie, Generator, LieElement};
use crate::limits::check_basis_size;
use crate::rat::Rat;

/// `(𝕃(V)/𝕃^{>N}, d)` with `d` given on generators and verified square-zero.
#[derive(Clone, Debug)]
pub struct Dgl {
    lie: Arc<FreeLie>,
    d: Vec<LieElement>,
}

impl Dgl {
    /// Validates degrees and `d² = 0` on every generator.
    pub fn build(lie: Arc<FreeLie>, d: Vec<LieElement>) -> Result<Dgl> {
        let dgl = Dgl::unchecked(lie, d)?;
        for (i, g) in dgl.lie.gens().iter().enumerate() {
            let dd = dgl.differential(&dgl.d[i]);
            if let Some(n) = dd.min_length() {
                let part = dd.length_component(n);
                return Err(Error::IllFormedDifferential {
                    generator: g.name.clone(),
                    length: n,
                    witness: part.to_expr_string(),
                });
            }
        }
        Ok(dgl)
    }

    /// Checks shapes and degrees but not `d² = 0`.
    pub fn unchecked(lie: Arc<FreeLie>, d: Vec<LieElement>) -> Result<Dgl> {
        if d.len() != lie.rank() {
            return Err(Error::Shape(format!("{} differential values for {} generators", d.len(), lie.rank())));
        }
        for (g, v) in lie.gens().iter().zip(&d) {
            if !FreeLie::same_algebra(v.ctx(), &lie) {
                return Err(Error::Shape(format!("d({}) lives in another algebra", g.name)));
            }
            if !v.is_of_degree(g.degree - 1) {
                return Err(Error::Degree(format!("d({}) must have degree {}", g.name, g.degree - 1)));
            }
        }
        Ok(Dgl { lie, d })
    }

    /// Zero differential.
    pub fn free(lie: Arc<FreeLie>) -> Dgl {
        let d = vec![LieElement::zero(&lie); lie.rank()];
        Dgl { lie, d }
    }

    pub fn lie(&self) -> &Arc<FreeLie> {
        &self.lie
    }

    pub fn gens(&self) -> &[Generator] {
        self.lie.gens()
    }

    pub fn cap(&self) -> usize {
        self.lie.cap()
    }

    pub fn d_on_gens(&self) -> &[LieElement] {
        &self.d
    }

    pub fn gen(&self, name: &str) -> Result<LieElement> {
        LieElement::named(&self.lie, name)
    }

    pub fn differential(&self, e: &LieElement) -> LieElement {
        e.apply_derivation(&self.d, -1, None, &self.lie)
    }

    /// Same differential at another cap (values truncated or reinterpreted).
    pub fn with_cap(&self, cap: usize) -> Dgl {
        let lie = self.lie.with_cap(cap);
        let d = self.d.iter().map(|v| v.recap(&lie)).collect();
        Dgl { lie, d }
    }

    /// Length-preserving part of `d`, i.e. the linear part on generators.
    pub fn linear_part(&self) -> Dgl {
        let d = self.d.iter().map(|v| v.length_component(1)).collect();
        Dgl { lie: self.lie.clone(), d }
    }

    /// `(d + ad_a)`; square-zero exactly when `a` is Maurer–Cartan.
    pub fn perturb(&self, a: &LieElement) -> Result<Dgl> {
        let (ok, residue) = self.check_mc(a)?;
        if !ok {
            return Err(Error::NotMaurerCartan { residue: residue.to_expr_string() });
        }
        let d = self.d.iter().enumerate().map(|(i, v)| v.add(&a.bracket(&LieElement::generator(&self.lie, i)))).collect();
        Dgl::build(self.lie.clone(), d)
    }

    /// Returns whether `da + ½[a,a] = 0`, with the left side.
    pub fn check_mc(&self, a: &LieElement) -> Result<(bool, LieElement)> {
        if !a.is_of_degree(-1) {
            return Err(Error::Degree("Maurer-Cartan elements have degree -1".into()));
        }
        let r = self.differential(a).add(&a.bracket(a).scale(&Rat::new(1, 2)));
        Ok((r.is_zero(), r))
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.lie.dim(degree)
    }

    /// Matrix of `d` from degree `n` to degree `n−1` in the graded bases.
    pub fn boundary_matrix(&self, n: i64) -> Result<SparseMat> {
        let src = self.lie.graded_basis(n);
        let dst = self.lie.graded_basis(n - 1);
        check_basis_size(n, src.dim())?;
        check_basis_size(n - 1, dst.dim())?;
        let cols = (0..src.dim())
            .map(|j| dst.coordinates(&self.differential(&src.element(j))))
            .collect::<Result<Vec<SparseVec>>>()?;
        SparseMat::from_columns(dst.dim(), cols)
    }

    /// Underlying chain complex in degrees `lo−1 ..= hi+1` (clipped to where the algebra lives).
    pub fn chain_complex(&self, lo: i64, hi: i64) -> Result<GradedChainComplex> {
        let Some((a, b)) = self.lie.degree_span() else {
            return Ok(GradedChainComplex::zero());
        };
        let from = (lo - 1).max(a);
        let to = (hi + 1).min(b);
        if from > to {
            return Ok(GradedChainComplex::zero());
        }
        let mut bases = Vec::new();
        let mut boundaries = Vec::new();
        for n in from..=to {
            let gb = self.lie.graded_basis(n);
            check_basis_size(n, gb.dim())?;
            bases.push(gb.labels());
            boundaries.push(if n == from { SparseMat::zeros(0, gb.dim()) } else { self.boundary_matrix(n)? });
        }
        Ok(GradedChainComplex::new(from, bases, boundaries)?.with_meta("cap", self.cap()))
    }

    /// The component at an MC element: degree-0 cycles of `d_a` and everything above.
    pub fn component(&self, a: &LieElement, hi: i64) -> Result<GradedChainComplex> {
        let p = self.perturb(a)?;
        Ok(p.chain_complex(0, hi)?.cover(0))
    }
}

/// Degree-0 map between free truncated dgl's, given on generators.
#[derive(Clone, Debug)]
pub struct DglMorphism {
    pub source: Dgl,
    pub target: Dgl,
    pub images: Vec<LieElement>,
}

impl DglMorphism {
    pub fn new(source: Dgl, target: Dgl, images: Vec<LieElement>) -> Result<DglMorphism> {
        if images.len() != source.lie().rank() {
            return Err(Error::Shape("one image per source generator is required".into()));
        }
        for (g, v) in source.gens().iter().zip(&images) {
            if !FreeLie::same_algebra(v.ctx(), target.lie()) {
                return Err(Error::Shape(format!("image of {} lives in another algebra", g.name)));
            }
            if !v.is_of_degree(g.degree) {
                return Err(Error::Degree(format!("image of {} must have degree {}", g.name, g.degree)));
            }
        }
        let f = DglMorphism { source, target, images };
        for (i, g) in f.source.gens().iter().enumerate() {
            let lhs = f.apply(&f.source.d_on_gens()[i]);
            let rhs = f.target.differential(&f.images[i]);
            if lhs != rhs {
                return Err(Error::NotMorphism(format!(
                    "f(d{}) - d(f{}) = {}",
                    g.name,
                    g.name,
                    lhs.sub(&rhs).to_expr_string()
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(l: &Dgl) -> DglMorphism {
        let images = (0..l.lie().rank()).map(|i| LieElement::generator(l.lie(), i)).collect();
        DglMorphism { source: l.clone(), target: l.clone(), images }
    }

    pub fn apply(&self, e: &LieElement) -> LieElement {
        e.substitute(&self.images, self.target.lie())
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &DglMorphism) -> Result<DglMorphism> {
        let images = other.images.iter().map(|v| self.apply(v)).collect();
        DglMorphism::new(other.source.clone(), self.target.clone(), images)
    }

    pub fn is_endomorphism(&self) -> bool {
        FreeLie::same_algebra(self.source.lie(), self.target.lie())
    }

    pub fn same_images(&self, other: &DglMorphism) -> bool {
        self.images == other.images
    }
}

/// A derivation of the free algebra given on generators; `degree` is its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub degree: i64,
    pub values: Vec<LieElement>,
}

impl Derivation {
    pub fn new(lie: &Arc<FreeLie>, degree: i64, values: Vec<LieElement>) -> Result<Derivation> {
        if values.len() != lie.rank() {
            return Err(Error::Shape("one value per generator is required".into()));
        }
        for (g, v) in lie.gens().iter().zip(&values) {
            if !v.is_of_degree(g.degree + degree) {
                return Err(Error::Degree(format!("value on {} must have degree {}", g.name, g.degree + degree)));
            }
        }
        Ok(Derivation { degree, values })
    }

    pub fn zero(lie: &Arc<FreeLie>, degree: i64) -> Derivation {
        Derivation { degree, values: vec![LieElement::zero(lie); lie.rank()] }
    }

    /// Inner derivation `[x, ·]`.
    pub fn ad(x: &LieElement) -> Result<Derivation> {
        let degree = x.degree().unwrap_or(0);
        if !x.is_of_degree(degree) {
            return Err(Error::Degree("ad needs a homogeneous element".into()));
        }
        let lie = x.ctx();
        let values = (0..lie.rank()).map(|i| x.bracket(&LieElement::generator(lie, i))).collect();
        Ok(Derivation { degree, values })
    }

    pub fn apply(&self, e: &LieElement) -> LieElement {
        e.apply_derivation(&self.values, self.degree, None, e.ctx())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Graded commutator `[θ,η] = θη − (−1)^{|θ||η|} ηθ`, evaluated on generators.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let sign = Rat::sign(self.degree * other.degree);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| self.apply(b).sub(&other.apply(a).scale(&sign)))
            .collect();
        Derivation { degree: self.degree + other.degree, values }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation { degree: self.degree, values: self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Derivation {
        Derivation { degree: self.degree, values: self.values.iter().map(|a| a.scale(c)).collect() }
    }

    /// `D θ = [d, θ] = dθ − (−1)^{|θ|} θd`.
    pub fn boundary(&self, l: &Dgl) -> Derivation {
        let d = Derivation { degree: -1, values: l.d_on_gens().to_vec() };
        d.bracket(self)
    }

    /// Matrix of the length-1 part on generators: column `j` = linear part of θ(v_j).
    pub fn linear_matrix(&self) -> SparseMat {
        let n = self.values.len();
        let cols = self
            .values
            .iter()
            .map(|v| SparseVec::from_pairs(v.length_component(1).terms().iter().map(|(w, c)| (w[0] as usize, c.clone()))))
            .collect();
        SparseMat::from_columns(n, cols).expect("square")
    }
}

/// Whether a square matrix is nilpotent.
pub fn is_nilpotent(m: &SparseMat) -> bool {
    let mut p = m.clone();
    for _ in 0..m.n_cols().max(1) {
        if p.is_zero() {
            return true;
        }
        p = p.mul(m).expect("square");
    }
    p.is_zero()
}
