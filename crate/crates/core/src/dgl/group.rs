// SPDX-License-Identifier: Apache-2.0
//! BCH product, exponentials and logarithms, and the gauge action.

use std::sync::Arc;

use super::presentation::{is_nilpotent, Derivation, Dgl, DglMorphism};
use crate::error::{Error, Result};
use crate::exactlin::{solve_linear, SparseMat, SparseVec};
use crate::freelie::{FreeLie, LieElement, Tensor};
use crate::rat::Rat;

/// `exp(t)` in the truncated tensor algebra; `t` must have no constant term.
pub fn tensor_exp(t: &Tensor, cap: usize) -> Tensor {
    let mut out = Tensor::unit();
    let mut term = Tensor::unit();
    for k in 1..=cap {
        term = term.mul(t, cap).0.scaled(&Rat::new(1, k as i64));
        if term.is_zero() {
            break;
        }
        out.add_scaled(&term, &Rat::one());
    }
    out
}

/// `log(1 + z)` in the truncated tensor algebra; `z` must have no constant term.
pub fn tensor_log1p(z: &Tensor, cap: usize) -> Tensor {
    let mut out = Tensor::zero();
    let mut power = Tensor::unit();
    for k in 1..=cap {
        power = power.mul(z, cap).0;
        if power.is_zero() {
            break;
        }
        out.add_scaled(&power, &Rat::new(if k % 2 == 1 { 1 } else { -1 }, k as i64));
    }
    out
}

fn require_degree_zero(e: &LieElement, what: &str) -> Result<()> {
    if e.is_of_degree(0) {
        Ok(())
    } else {
        Err(Error::Degree(format!("{what} must have degree 0")))
    }
}

/// `x * y = log(eˣ eʸ)` for degree-0 elements.
pub fn bch(x: &LieElement, y: &LieElement) -> Result<LieElement> {
    require_degree_zero(x, "BCH factors")?;
    require_degree_zero(y, "BCH factors")?;
    if !FreeLie::same_algebra(x.ctx(), y.ctx()) {
        return Err(Error::Shape("BCH factors live in different algebras".into()));
    }
    let cap = x.ctx().cap();
    let ex = tensor_exp(x.terms(), cap);
    let ey = tensor_exp(y.terms(), cap);
    let mut z = ex.mul(&ey, cap).0;
    z.add_term(Default::default(), &Rat::from_int(-1));
    let l = tensor_log1p(&z, cap);
    LieElement::try_from_tensor(x.ctx(), l).map_err(|_| Error::Internal("BCH result is not a Lie element".into()))
}

/// `e^{ad_x}(y) = Σ ad_xᵏ(y)/k!`
pub fn exp_ad(x: &LieElement, y: &LieElement) -> LieElement {
    let mut acc = y.clone();
    let mut term = y.clone();
    for k in 1..=x.ctx().cap() {
        term = x.bracket(&term).scale(&Rat::new(1, k as i64));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

/// Iteration bound for a map whose linear part is nilpotent and which never lowers length.
fn nilpotent_bound(lie: &Arc<FreeLie>) -> usize {
    lie.rank().max(1) * lie.cap() + 1
}

/// Automorphism `e^θ = Σ θⁿ/n!` of a degree-0 derivation with nilpotent linear part.
pub fn exp_derivation(lie: &Arc<FreeLie>, theta: &Derivation) -> Result<Vec<LieElement>> {
    if theta.degree != 0 {
        return Err(Error::Degree("only degree-0 derivations exponentiate".into()));
    }
    if !is_nilpotent(&theta.linear_matrix()) {
        return Err(Error::Divergence("the linear part of the derivation is not nilpotent".into()));
    }
    let bound = nilpotent_bound(lie);
    (0..lie.rank())
        .map(|i| {
            let g = LieElement::generator(lie, i);
            let mut acc = g.clone();
            let mut term = g;
            for n in 1..=bound {
                term = theta.apply(&term).scale(&Rat::new(1, n as i64));
                if term.is_zero() {
                    return Ok(acc);
                }
                acc = acc.add(&term);
            }
            Err(Error::Internal("exponential series did not terminate".into()))
        })
        .collect()
}

/// `log f = Σ (−1)^{n+1}(f − id)ⁿ/n` for an endomorphism with `f − id` nilpotent on generators.
pub fn log_automorphism(lie: &Arc<FreeLie>, images: &[LieElement]) -> Result<Derivation> {
    let ident: Vec<LieElement> = (0..lie.rank()).map(|i| LieElement::generator(lie, i)).collect();
    let shift: Vec<LieElement> = images.iter().zip(&ident).map(|(f, g)| f.sub(g)).collect();
    let shift_der = Derivation::new(lie, 0, shift)?;
    if !is_nilpotent(&shift_der.linear_matrix()) {
        return Err(Error::Divergence("f - id is not nilpotent on generators".into()));
    }
    let bound = nilpotent_bound(lie);
    let values = ident
        .iter()
        .map(|g| {
            let mut acc = LieElement::zero(lie);
            let mut term = g.clone();
            for n in 1..=bound {
                term = term.substitute(images, lie).sub(&term);
                if term.is_zero() {
                    return Ok(acc);
                }
                let c = Rat::new(if n % 2 == 1 { 1 } else { -1 }, n as i64);
                acc = acc.add(&term.scale(&c));
            }
            Err(Error::Internal("logarithm series did not terminate".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Derivation::new(lie, 0, values)
}

/// `x𝒢a = e^{ad_x}(a) − ((e^{ad_x} − 1)/ad_x)(dx)`, without MC checks.
pub fn gauge_raw(l: &Dgl, x: &LieElement, a: &LieElement) -> LieElement {
    let dx = l.differential(x);
    let mut acc = exp_ad(x, a);
    let mut term = dx;
    for i in 0..=l.cap() {
        if term.is_zero() {
            break;
        }
        acc = acc.sub(&term.scale(&Rat::inv_factorial(i + 1)));
        term = x.bracket(&term);
    }
    acc
}

/// Gauge action of a degree-0 element on an MC element.
pub fn gauge_act(l: &Dgl, x: &LieElement, a: &LieElement) -> Result<LieElement> {
    require_degree_zero(x, "gauge elements")?;
    let (ok, residue) = l.check_mc(a)?;
    if !ok {
        return Err(Error::NotMaurerCartan { residue: residue.to_expr_string() });
    }
    let out = gauge_raw(l, x, a);
    let (ok, residue) = l.check_mc(&out)?;
    if !ok {
        return Err(Error::NotMaurerCartan { residue: residue.to_expr_string() });
    }
    Ok(out)
}

/// Outcome of the stage-by-stage gauge search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaugeSearch {
    Witness(LieElement),
    /// Obstruction at this bracket length.
    Obstructed { length: usize },
}

/// Looks for `x` with `x𝒢a = b`, fixing `x` one bracket length at a time.
///
/// At length n the correction `xₙ` solves `−d₁xₙ = rₙ`, where `d₁` is the
/// length-preserving part of `d` and `rₙ` the length-n part of `b − x𝒢a`.
pub fn gauge_equivalent(l: &Dgl, a: &LieElement, b: &LieElement) -> Result<GaugeSearch> {
    for e in [a, b] {
        let (ok, residue) = l.check_mc(e)?;
        if !ok {
            return Err(Error::NotMaurerCartan { residue: residue.to_expr_string() });
        }
    }
    let lie = l.lie();
    let d1 = l.linear_part();
    let mut x = LieElement::zero(lie);
    for n in 1..=l.cap() {
        let r = b.sub(&gauge_raw(l, &x, a)).length_component(n);
        if r.is_zero() {
            continue;
        }
        let src = lie.block(0, n);
        let dst = lie.block(-1, n);
        let cols = src
            .elements
            .iter()
            .map(|t| dst.coordinates(d1.differential(&LieElement::from_tensor(lie, t.clone())).neg().terms()))
            .collect::<Result<Vec<SparseVec>>>()?;
        let m = SparseMat::from_columns(dst.dim(), cols)?;
        let rhs = dst.coordinates(r.terms())?;
        match solve_linear(&m, &rhs)? {
            None => return Ok(GaugeSearch::Obstructed { length: n }),
            Some(sol) => {
                for (j, c) in sol.iter() {
                    x.add_scaled(&LieElement::from_tensor(lie, src.elements[j].clone()), c);
                }
            }
        }
    }
    if gauge_raw(l, &x, a) != *b {
        return Err(Error::Internal("gauge search produced a non-witness".into()));
    }
    Ok(GaugeSearch::Witness(x))
}

/// `[y]•φ = e^{ad_y}∘φ` for a degree-0 cycle `y` of the target.
pub fn act_on_morphism(y: &LieElement, phi: &DglMorphism) -> Result<DglMorphism> {
    require_degree_zero(y, "acting elements")?;
    if !phi.target.differential(y).is_zero() {
        return Err(Error::Usage("acting element is not a cycle".into()));
    }
    let images = phi.images.iter().map(|v| exp_ad(y, v)).collect();
    DglMorphism::new(phi.source.clone(), phi.target.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::Generator;

    fn uv(cap: usize) -> (Arc<FreeLie>, LieElement, LieElement) {
        let lie = FreeLie::new(vec![Generator::new("u", 0), Generator::new("v", 0)], cap).unwrap();
        let u = LieElement::named(&lie, "u").unwrap();
        let v = LieElement::named(&lie, "v").unwrap();
        (lie, u, v)
    }

    #[test]
    fn bch_low_order() {
        let (_, u, v) = uv(2);
        let z = bch(&u, &v).unwrap();
        assert_eq!(z, u.add(&v).add(&u.bracket(&v).scale(&Rat::new(1, 2))));
        let (lie, u, _) = uv(5);
        assert_eq!(bch(&u, &LieElement::zero(&lie)).unwrap(), u);
        let a = bch(&u.scale(&Rat::new(2, 3)), &u.scale(&Rat::new(-1, 5))).unwrap();
        assert_eq!(a, u.scale(&Rat::new(7, 15)));
    }

    #[test]
    fn third_order_bch_coefficients() {
        let (_, u, v) = uv(3);
        let z = bch(&u, &v).unwrap();
        let uuv = u.bracket(&u.bracket(&v));
        let vvu = v.bracket(&v.bracket(&u));
        let expected = u.add(&v).add(&u.bracket(&v).scale(&Rat::new(1, 2))).add(&uuv.scale(&Rat::new(1, 12))).add(&vvu.scale(&Rat::new(1, 12)));
        assert_eq!(z, expected);
    }

    #[test]
    fn exp_log_wedge_example() {
        let lie = FreeLie::new(vec![Generator::new("x", 1), Generator::new("y", 1)], 4).unwrap();
        let x = LieElement::named(&lie, "x").unwrap();
        let y = LieElement::named(&lie, "y").unwrap();
        let f = vec![x.add(&y), y.clone()];
        let theta = log_automorphism(&lie, &f).unwrap();
        assert_eq!(theta.values, vec![y.clone(), LieElement::zero(&lie)]);
        assert_eq!(exp_derivation(&lie, &theta).unwrap(), f);
    }

    #[test]
    fn exp_of_non_nilpotent_diverges() {
        let (lie, u, v) = uv(3);
        let id = Derivation::new(&lie, 0, vec![u, v]).unwrap();
        assert!(matches!(exp_derivation(&lie, &id), Err(Error::Divergence(_))));
    }

    #[test]
    fn interval_edge_joins_the_vertices() {
        let l = crate::dgl::builtins::interval(6).unwrap();
        let (a, b, x) = (l.gen("a").unwrap(), l.gen("b").unwrap(), l.gen("x").unwrap());
        assert_eq!(gauge_act(&l, &x, &b).unwrap(), a);
        assert_eq!(gauge_act(&l, &x.neg(), &a).unwrap(), b);
        assert_ne!(gauge_act(&l, &x, &a).unwrap(), b);
        match gauge_equivalent(&l, &a, &b).unwrap() {
            GaugeSearch::Witness(w) => assert_eq!(w, x.neg()),
            other => panic!("{other:?}"),
        }
    }
}
