// SPDX-License-Identifier: Apache-2.0
//! Twisted products `Der ×̃ sL`, `Der_φ ×̃ sL`, `L ×̃ Der` and `Hom(C, L) ×̃ Der L`.

use std::fmt;

use super::space::{assemble, DerComplex};
use crate::cdgc::{Convolution, HomElement};
use crate::dgl::{Derivation, Dgl};
use crate::error::{Error, Result};
use crate::exactlin::{les_of_ses, ChainMap, GradedChainComplex, LongExactSequence, SparseMat, SparseVec};
use crate::freelie::LieElement;
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `Der L ×̃ sL`: `D(sx) = −s dx + ad_x`, `[θ, sx] = (−1)^{|θ|} sθ(x)`.
    DerSl,
    /// `Der_φ(L′, L) ×̃ sL`: `D(sx) = −s dx + ad_x∘φ`.
    FderSl,
    /// `L ×̃ Der L`: `[θ, x] = θ(x)`.
    LDer,
    /// `Hom(C, L) ×̃ Der L`: `[θ, f] = θ∘f`.
    HomDer,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::DerSl => "DER_SL",
            Variant::FderSl => "FDER_SL",
            Variant::LDer => "L_DER",
            Variant::HomDer => "HOM_DER",
        })
    }
}

/// `0 → sub → total → quotient → 0` with the total basis in each degree
/// listed as the sub basis followed by the quotient basis.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub variant: Variant,
    pub from: i64,
    pub to: i64,
    pub total: GradedChainComplex,
    pub sub: GradedChainComplex,
    pub quotient: GradedChainComplex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

impl TwistedComplex {
    /// Assembles the total complex; `quotient_column(n, k)` is the total boundary of
    /// the k-th quotient basis element as (sub part, quotient part).
    fn build(
        variant: Variant,
        from: i64,
        to: i64,
        sub: GradedChainComplex,
        quotient: GradedChainComplex,
        quotient_column: impl Fn(i64, usize) -> Result<(SparseVec, SparseVec)>,
    ) -> Result<TwistedComplex> {
        let total = assemble(
            from,
            to,
            |n| sub.basis(n).iter().chain(quotient.basis(n)).cloned().collect(),
            |n, k| {
                let a = sub.dim(n);
                if k < a {
                    return Ok(sub.boundary(n).column(k).clone());
                }
                let (s, q) = quotient_column(n, k - a)?;
                let offset = sub.dim(n - 1);
                let mut v = s;
                v.add_scaled(&q.remap(|i| Some(i + offset)), &Rat::one());
                Ok(v)
            },
        )
        .map_err(|e| match e {
            Error::IllFormedComplex { degree } => Error::NotMorphism(format!("{variant}: the twisting datum is not a chain map (D² ≠ 0 at degree {degree})")),
            other => other,
        })?;
        let mut inclusion = ChainMap::default();
        let mut projection = ChainMap::default();
        for n in from..=to {
            let (a, c) = (sub.dim(n), quotient.dim(n));
            inclusion.maps.insert(n, SparseMat::from_columns(a + c, (0..a).map(SparseVec::unit).collect())?);
            let cols = (0..a).map(|_| SparseVec::new()).chain((0..c).map(SparseVec::unit)).collect();
            projection.maps.insert(n, SparseMat::from_columns(c, cols)?);
        }
        inclusion.verify(&sub, &total, from, to)?;
        projection.verify(&total, &quotient, from, to)?;
        Ok(TwistedComplex { variant, from, to, total, sub, quotient, inclusion, projection })
    }

    /// Homology long exact sequence, verified exact on `lo..=hi`.
    pub fn les(&self, lo: i64, hi: i64) -> Result<LongExactSequence> {
        if lo - 1 < self.from || hi + 2 > self.to {
            return Err(Error::Usage(format!("the LES on {lo}..{hi} needs the complexes on {}..{}", lo - 1, hi + 2)));
        }
        les_of_ses(&self.sub, &self.total, &self.quotient, &self.inclusion, &self.projection, lo, hi)
    }
}

/// The complex of a dgl on degrees `from..=to`, on graded bases.
pub(crate) fn lie_complex(l: &Dgl, from: i64, to: i64, shift: i64, prefix: &str) -> Result<GradedChainComplex> {
    let lie = l.lie();
    assemble(
        from,
        to,
        |n| lie.graded_basis(n - shift).labels().into_iter().map(|s| format!("{prefix}{s}")).collect(),
        |n, k| {
            let x = lie.graded_basis(n - shift).element(k);
            let dx = l.differential(&x);
            let v = lie.graded_basis(n - shift - 1).coordinates(&dx)?;
            Ok(if shift == 0 { v } else { v.scaled(&Rat::from_int(-1)) })
        },
    )
}

/// Element `θ + sx` of `Der ×̃ sL`, with `susp` holding `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerSlElement {
    pub degree: i64,
    pub der: Derivation,
    pub susp: LieElement,
}

/// `Der_φ(L′, L) ×̃ sL` on the window of the derivation complex.
#[derive(Clone, Debug)]
pub struct DerSl {
    pub der: DerComplex,
}

impl DerSl {
    pub fn new(der: DerComplex) -> DerSl {
        DerSl { der }
    }

    pub fn variant(&self) -> Variant {
        if self.der.space.is_identity() {
            Variant::DerSl
        } else {
            Variant::FderSl
        }
    }

    fn target(&self) -> &Dgl {
        self.der.space.target()
    }

    pub fn complex(&self) -> Result<TwistedComplex> {
        let (from, to) = (self.der.from, self.der.to);
        let sub = self.der.chain_complex()?;
        let quotient = lie_complex(self.target(), from, to, 1, "s")?;
        let lie = self.target().lie().clone();
        TwistedComplex::build(self.variant(), from, to, sub, quotient, |n, k| {
            let x = lie.graded_basis(n - 1).element(k);
            let ad = self.der.space.ad(&x)?;
            let s = self
                .der
                .coordinates(&Derivation { degree: n - 1, values: ad.values })
                .map_err(|_| Error::InvalidSubgroup(format!("ad_{} lies outside the derivation subspace", x.to_expr_string())))?;
            let q = lie.graded_basis(n - 2).coordinates(&self.target().differential(&x))?.scaled(&Rat::from_int(-1));
            Ok((s, q))
        })
    }

    pub fn zero(&self, n: i64) -> DerSlElement {
        DerSlElement { degree: n, der: self.der.space.zero(n), susp: LieElement::zero(self.target().lie()) }
    }

    pub fn element(&self, n: i64, v: &SparseVec) -> DerSlElement {
        let a = self.der.dim(n);
        let sub = SparseVec::from_pairs(v.iter().filter(|(i, _)| *i < a).map(|(i, c)| (i, c.clone())));
        let quot = SparseVec::from_pairs(v.iter().filter(|(i, _)| *i >= a).map(|(i, c)| (i - a, c.clone())));
        DerSlElement { degree: n, der: self.der.combine(n, &sub), susp: self.target().lie().graded_basis(n - 1).combine(&quot) }
    }

    pub fn coordinates(&self, e: &DerSlElement) -> Result<SparseVec> {
        let mut v = self.der.coordinates(&e.der)?;
        let a = self.der.dim(e.degree);
        let q = self.target().lie().graded_basis(e.degree - 1).coordinates(&e.susp)?;
        v.add_scaled(&q.remap(|i| Some(i + a)), &Rat::one());
        Ok(v)
    }

    pub fn differential(&self, e: &DerSlElement) -> Result<DerSlElement> {
        let ad = self.der.space.ad(&e.susp)?;
        let mut der = self.der.space.boundary(&e.der);
        if !e.susp.is_zero() {
            der = der.add(&Derivation { degree: e.degree - 1, values: ad.values });
        }
        Ok(DerSlElement { degree: e.degree - 1, der, susp: self.target().differential(&e.susp).neg() })
    }

    /// `[θ + sx, η + sy] = [θ, η] + (−1)^{|θ|} sθ(y) − (−1)^{|sx||η| + |η|} sη(x)`
    pub fn bracket(&self, a: &DerSlElement, b: &DerSlElement) -> Result<DerSlElement> {
        let space = &self.der.space;
        let der = space.bracket(&a.der, &b.der)?;
        let mut susp = space.apply(&a.der, &b.susp).scale(&Rat::sign(a.degree));
        susp.add_scaled(&space.apply(&b.der, &a.susp), &-Rat::sign(a.degree * b.degree + b.degree));
        Ok(DerSlElement { degree: a.degree + b.degree, der, susp })
    }
}

/// Element `x + θ` of `L ×̃ Der L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LDerElement {
    pub degree: i64,
    pub lie: LieElement,
    pub der: Derivation,
}

/// `L ×̃ Der L` on the window of the derivation complex; `d ⊕ D` with `[θ, x] = θ(x)`.
#[derive(Clone, Debug)]
pub struct LDer {
    pub der: DerComplex,
}

impl LDer {
    pub fn new(der: DerComplex) -> Result<LDer> {
        if !der.space.is_identity() {
            return Err(Error::Usage("L ×̃ Der needs derivations of L itself".into()));
        }
        Ok(LDer { der })
    }

    fn target(&self) -> &Dgl {
        self.der.space.target()
    }

    pub fn complex(&self) -> Result<TwistedComplex> {
        let (from, to) = (self.der.from, self.der.to);
        let sub = lie_complex(self.target(), from, to, 0, "")?;
        let quotient = self.der.chain_complex()?;
        TwistedComplex::build(Variant::LDer, from, to, sub, quotient, |n, k| {
            let d = self.der.space.boundary(&self.der.element(n, k));
            Ok((SparseVec::new(), self.der.coordinates(&d)?))
        })
    }

    pub fn element(&self, n: i64, v: &SparseVec) -> LDerElement {
        let lie = self.target().lie();
        let a = lie.dim(n);
        let sub = SparseVec::from_pairs(v.iter().filter(|(i, _)| *i < a).map(|(i, c)| (i, c.clone())));
        let quot = SparseVec::from_pairs(v.iter().filter(|(i, _)| *i >= a).map(|(i, c)| (i - a, c.clone())));
        LDerElement { degree: n, lie: lie.graded_basis(n).combine(&sub), der: self.der.combine(n, &quot) }
    }

    pub fn coordinates(&self, e: &LDerElement) -> Result<SparseVec> {
        let lie = self.target().lie();
        let mut v = lie.graded_basis(e.degree).coordinates(&e.lie)?;
        let a = lie.dim(e.degree);
        v.add_scaled(&self.der.coordinates(&e.der)?.remap(|i| Some(i + a)), &Rat::one());
        Ok(v)
    }

    /// `[x + θ, y + η] = [x, y] + θ(y) − (−1)^{|x||η|} η(x) + [θ, η]`
    pub fn bracket(&self, a: &LDerElement, b: &LDerElement) -> Result<LDerElement> {
        let space = &self.der.space;
        let mut lie = a.lie.bracket(&b.lie);
        lie = lie.add(&space.apply(&a.der, &b.lie));
        lie.add_scaled(&space.apply(&b.der, &a.lie), &-Rat::sign(a.degree * b.degree));
        Ok(LDerElement { degree: a.degree + b.degree, lie, der: space.bracket(&a.der, &b.der)? })
    }
}

/// `Hom(C, L) ×̃ Der L`: `D ⊕ D` with `[θ, f] = θ∘f`.
#[derive(Clone, Debug)]
pub struct HomDer {
    pub conv: Convolution,
    pub der: DerComplex,
}

impl HomDer {
    pub fn new(conv: Convolution, der: DerComplex) -> Result<HomDer> {
        if !der.space.is_identity() || !crate::freelie::FreeLie::same_algebra(conv.target.lie(), der.space.target().lie()) {
            return Err(Error::Usage("Hom(C, L) ×̃ Der L needs Der of the convolution target".into()));
        }
        Ok(HomDer { conv, der })
    }

    pub fn complex(&self) -> Result<TwistedComplex> {
        let (from, to) = (self.der.from, self.der.to);
        let conv = &self.conv;
        let sub = assemble(from, to, |n| conv.labels(n), |n, k| conv.coordinates(&conv.differential(&conv.basis_element(n, conv.basis(n)[k]))))?;
        let quotient = self.der.chain_complex()?;
        TwistedComplex::build(Variant::HomDer, from, to, sub, quotient, |n, k| {
            let d = self.der.space.boundary(&self.der.element(n, k));
            Ok((SparseVec::new(), self.der.coordinates(&d)?))
        })
    }

    /// `θ∘f`
    pub fn act(&self, theta: &Derivation, f: &HomElement) -> HomElement {
        HomElement { degree: theta.degree + f.degree, values: f.values.iter().map(|v| self.der.space.apply(theta, v)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdgc::Chains;
    use crate::derivations::space::DerSpace;
    use crate::dgl::builtins;

    fn der_sl(l: &Dgl, from: i64, to: i64) -> DerSl {
        DerSl::new(DerComplex::full(DerSpace::of(l), from, to))
    }

    #[test]
    fn odd_sphere_der_sl_has_zero_differential() {
        let l = builtins::sphere(3, 5).unwrap();
        let t = der_sl(&l, -1, 7).complex().unwrap();
        let dims = t.total.homology_dims(0, 6).unwrap();
        assert_eq!(dims, vec![(0, 1), (1, 0), (2, 0), (3, 1), (4, 0), (5, 0), (6, 0)]);
        let c = t.total.cover(1);
        assert_eq!(c.homology_dims(1, 6).unwrap().iter().map(|x| x.1).collect::<Vec<_>>(), vec![0, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn even_sphere_ad_x_kills_the_squaring_derivation() {
        let l = builtins::sphere(2, 5).unwrap();
        let ds = der_sl(&l, -1, 8);
        let t = ds.complex().unwrap();
        let c = t.total.cover(1);
        let dims: Vec<usize> = c.homology_dims(1, 6).unwrap().iter().map(|x| x.1).collect();
        assert_eq!(dims, vec![0, 0, 1, 0, 0, 0]);
        // D(sx) = ad_x = (x ↦ [x,x])
        let x = l.gen("x").unwrap();
        let sx = DerSlElement { degree: 2, der: ds.der.space.zero(2), susp: x.clone() };
        let d = ds.differential(&sx).unwrap();
        assert_eq!(d.der.values[0], x.bracket(&x));
        assert!(d.susp.is_zero());
    }

    #[test]
    fn der_sl_differential_is_a_derivation_of_the_bracket() {
        let l = builtins::sphere(2, 5).unwrap();
        let ds = der_sl(&l, -1, 6);
        let mut elems = Vec::new();
        for n in 0..=4 {
            let dim = ds.der.dim(n) + l.lie().dim(n - 1);
            for k in 0..dim {
                elems.push(ds.element(n, &SparseVec::unit(k)));
            }
        }
        for a in &elems {
            for b in &elems {
                let lhs = ds.differential(&ds.bracket(a, b).unwrap()).unwrap();
                let r1 = ds.bracket(&ds.differential(a).unwrap(), b).unwrap();
                let r2 = ds.bracket(a, &ds.differential(b).unwrap()).unwrap();
                let s = Rat::sign(a.degree);
                let rhs_der = r1.der.add(&r2.der.scale(&s));
                let rhs_susp = r1.susp.add(&r2.susp.scale(&s));
                assert_eq!(lhs.der, rhs_der);
                assert_eq!(lhs.susp, rhs_susp);
            }
        }
    }

    #[test]
    fn hom_der_on_odd_sphere() {
        let l = builtins::sphere(3, 4).unwrap();
        let ch = Chains::build(&l, 4).unwrap();
        let conv = Convolution::new(ch.cdgc.clone(), l.clone(), false);
        let hd = HomDer::new(conv.clone(), DerComplex::full(DerSpace::of(&l), -2, 3)).unwrap();
        let t = hd.complex().unwrap();
        assert_eq!(t.total.total_dim(), 3);
        for n in -1..=3 {
            assert!(t.total.boundary(n).is_zero());
        }
        let theta = hd.der.element(0, 0);
        for n in [-1, 2] {
            let f = conv.basis_element(n, conv.basis(n)[0]);
            assert_eq!(hd.act(&theta, &f), f);
        }
    }

    #[test]
    fn l_der_bracket_is_evaluation() {
        let l = builtins::sphere(3, 4).unwrap();
        let ld = LDer::new(DerComplex::full(DerSpace::of(&l), -1, 3)).unwrap();
        let t = ld.complex().unwrap();
        assert_eq!(t.total.homology_dims(0, 2).unwrap(), vec![(0, 1), (1, 0), (2, 1)]);
        let theta = ld.element(0, &SparseVec::unit(0));
        let x = ld.element(2, &SparseVec::unit(0));
        assert_eq!(ld.bracket(&theta, &x).unwrap(), x);
    }
}
