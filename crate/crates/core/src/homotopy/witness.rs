// SPDX-License-Identifier: Apache-2.0
//! Homotopies `Φ: L′ → L ⊗ Λ(t, dt)` with `ε₀∘Φ = φ` and `ε₁∘Φ = ψ`.

use std::fmt;

use super::cylinder::{tensor_interval, Cylinder, PolyForm};
use crate::dgl::{Dgl, DglMorphism};
use crate::error::{Error, Result};
use crate::freelie::{FreeLie, LieElement};

/// Generator images of a candidate homotopy, all in one cylinder.
#[derive(Clone, Debug)]
pub struct Witness {
    pub source: Dgl,
    pub cylinder: Cylinder,
    pub images: Vec<PolyForm>,
}

impl Witness {
    pub fn new(source: &Dgl, cylinder: Cylinder, images: Vec<PolyForm>) -> Result<Witness> {
        if images.len() != source.lie().rank() {
            return Err(Error::Shape(format!("{} images for {} generators", images.len(), source.lie().rank())));
        }
        Ok(Witness { source: source.clone(), cylinder, images })
    }

    /// The same images in a cylinder with a larger polynomial cap.
    pub fn with_poly_cap(&self, poly_cap: usize) -> Result<Witness> {
        let cylinder = tensor_interval(&self.cylinder.dgl, poly_cap)?;
        let mut images = Vec::new();
        for f in &self.images {
            let mut g = cylinder.zero();
            for (k, x) in f.poly.iter().enumerate() {
                match g.poly.get_mut(k) {
                    Some(slot) => *slot = x.clone(),
                    None if !x.is_zero() => return Err(Error::Resource(format!("t^{k} exceeds the polynomial cap {poly_cap}"))),
                    None => {}
                }
            }
            for (k, x) in f.dt.iter().enumerate() {
                match g.dt.get_mut(k) {
                    Some(slot) => *slot = x.clone(),
                    None if !x.is_zero() => return Err(Error::Resource(format!("t^{k}dt exceeds the polynomial cap {poly_cap}"))),
                    None => {}
                }
            }
            g.dropped = f.dropped;
            images.push(g);
        }
        Ok(Witness { source: self.source.clone(), cylinder, images })
    }

    /// `ε_i∘Φ` as a dgl morphism.
    pub fn endpoint(&self, i: u8) -> Result<DglMorphism> {
        let images = self.images.iter().map(|f| self.cylinder.eval(f, i)).collect::<Result<Vec<_>>>()?;
        DglMorphism::new(self.source.clone(), self.cylinder.dgl.clone(), images)
    }
}

/// Why a witness was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomotopyFailure {
    Mismatch(String),
    NotLie { generator: String },
    Degree { generator: String, expected: i64 },
    /// `dΦ(g) ≠ Φ(dg)`.
    Differential { generator: String, d_image: String, image_of_d: String },
    Endpoint { endpoint: u8, generator: String, expected: String, found: String },
    /// An image reached the polynomial cap, so the check would not be sound.
    Unterminated { generator: String },
}

impl fmt::Display for HomotopyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyFailure::Mismatch(m) => f.write_str(m),
            HomotopyFailure::NotLie { generator } => write!(f, "Φ({generator}) has non-Lie coefficients"),
            HomotopyFailure::Degree { generator, expected } => write!(f, "Φ({generator}) is not homogeneous of degree {expected}"),
            HomotopyFailure::Differential { generator, d_image, image_of_d } => {
                write!(f, "dΦ({generator}) = {d_image} but Φ(d{generator}) = {image_of_d}")
            }
            HomotopyFailure::Endpoint { endpoint, generator, expected, found } => {
                write!(f, "ε{endpoint}Φ({generator}) = {found}, expected {expected}")
            }
            HomotopyFailure::Unterminated { generator } => write!(f, "Φ({generator}) reaches the polynomial cap"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyVerdict {
    pub holds: bool,
    pub failure: Option<HomotopyFailure>,
    pub poly_cap: usize,
    /// Largest polynomial degree among the images.
    pub poly_degree: usize,
    /// Verdict at `poly_cap + 1` agrees, when checked.
    pub stable: Option<bool>,
}

fn reject(w: &Witness, failure: HomotopyFailure) -> HomotopyVerdict {
    HomotopyVerdict { holds: false, failure: Some(failure), poly_cap: w.cylinder.poly_cap, poly_degree: max_degree(w), stable: None }
}

fn max_degree(w: &Witness) -> usize {
    w.images.iter().filter_map(|f| f.poly_degree()).max().unwrap_or(0)
}

/// Whether `Φ` is a dgl morphism into the cylinder with `ε₀∘Φ = φ` and `ε₁∘Φ = ψ`.
pub fn check_homotopy(w: &Witness, phi: &DglMorphism, psi: &DglMorphism) -> HomotopyVerdict {
    let target = &w.cylinder.dgl;
    for m in [phi, psi] {
        if !FreeLie::same_algebra(m.source.lie(), w.source.lie()) || !FreeLie::same_algebra(m.target.lie(), target.lie()) {
            return reject(w, HomotopyFailure::Mismatch("the morphisms and the witness have different source or target".into()));
        }
    }
    let cyl = &w.cylinder;
    let name = |i: usize| w.source.gens()[i].name.clone();
    for (i, f) in w.images.iter().enumerate() {
        if f.dropped || f.poly_degree().is_some_and(|k| k >= cyl.poly_cap) {
            return reject(w, HomotopyFailure::Unterminated { generator: name(i) });
        }
        if !cyl.is_lie(f) {
            return reject(w, HomotopyFailure::NotLie { generator: name(i) });
        }
        let expected = w.source.gens()[i].degree;
        if !cyl.is_of_degree(f, expected) {
            return reject(w, HomotopyFailure::Degree { generator: name(i), expected });
        }
    }
    for (i, f) in w.images.iter().enumerate() {
        let lhs = cyl.differential(f);
        let rhs = cyl.substitute(&w.source.d_on_gens()[i], &w.images);
        if !lhs.sub(&rhs).is_zero() {
            return reject(w, HomotopyFailure::Differential { generator: name(i), d_image: cyl.render(&lhs), image_of_d: cyl.render(&rhs) });
        }
    }
    for (endpoint, m) in [(0u8, phi), (1u8, psi)] {
        for (i, f) in w.images.iter().enumerate() {
            let found = match cyl.eval(f, endpoint) {
                Ok(e) => e,
                Err(e) => return reject(w, HomotopyFailure::Mismatch(e.to_string())),
            };
            if found != m.images[i] {
                let show = |e: &LieElement| e.to_expr_string();
                return reject(w, HomotopyFailure::Endpoint { endpoint, generator: name(i), expected: show(&m.images[i]), found: show(&found) });
            }
        }
    }
    HomotopyVerdict { holds: true, failure: None, poly_cap: cyl.poly_cap, poly_degree: max_degree(w), stable: None }
}

/// `check_homotopy` at the witness's polynomial cap and at one more.
pub fn check_homotopy_stable(w: &Witness, phi: &DglMorphism, psi: &DglMorphism) -> Result<HomotopyVerdict> {
    let mut v = check_homotopy(w, phi, psi);
    let again = check_homotopy(&w.with_poly_cap(w.cylinder.poly_cap + 1)?, phi, psi);
    v.stable = Some(again.holds == v.holds);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgl::{act_on_morphism, builtins};
    use crate::rat::Rat;

    /// `Ψ(x) = e^{t·ad_u}(v)`, `Ψ(b) = sign·u·dt` from the circle model into `𝕃(u, v)`.
    fn circle_witness(sign: i64) -> (Witness, DglMorphism, DglMorphism) {
        let source = builtins::circle(5).unwrap();
        let target = builtins::wedge(&[1, 1], 5).unwrap();
        let cyl = tensor_interval(&target, 6).unwrap();
        let (u, v) = (target.gen("u").unwrap(), target.gen("v").unwrap());
        let psi_b = cyl.dt_monomial(0, &u.scale(&Rat::from_int(sign))).unwrap();
        let psi_x = cyl.exp_t_ad(&u, &v);
        let w = Witness::new(&source, cyl, vec![psi_b, psi_x]).unwrap();
        let f = DglMorphism::new(source.clone(), target.clone(), vec![LieElement::zero(target.lie()), v.clone()]).unwrap();
        let g = act_on_morphism(&u, &f).unwrap();
        (w, f, g)
    }

    #[test]
    fn circle_homotopy_is_accepted() {
        let (w, f, g) = circle_witness(-1);
        let v = check_homotopy_stable(&w, &f, &g).unwrap();
        assert!(v.holds, "{:?}", v.failure);
        assert_eq!(v.stable, Some(true));
        assert_eq!(w.endpoint(1).unwrap().images, g.images);
    }

    #[test]
    fn flipped_sign_is_rejected_at_x() {
        let (w, f, g) = circle_witness(1);
        let v = check_homotopy(&w, &f, &g);
        assert!(!v.holds);
        assert!(matches!(v.failure, Some(HomotopyFailure::Differential { ref generator, .. }) if generator == "x"));
    }

    #[test]
    fn constant_witness() {
        let l = builtins::circle(4).unwrap();
        let cyl = tensor_interval(&l, 2).unwrap();
        let id = DglMorphism::identity(&l);
        let images = id.images.iter().map(|x| cyl.constant(x)).collect();
        let w = Witness::new(&l, cyl, images).unwrap();
        assert!(check_homotopy(&w, &id, &id).holds);
    }

    #[test]
    fn wrong_endpoint_is_reported() {
        let (w, f, _) = circle_witness(-1);
        let v = check_homotopy(&w, &f, &f);
        assert!(matches!(v.failure, Some(HomotopyFailure::Endpoint { endpoint: 1, .. })));
    }
}
