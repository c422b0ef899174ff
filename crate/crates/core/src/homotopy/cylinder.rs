// SPDX-License-Identifier: Apache-2.0
//! `L ⊗ Λ(t, dt)` truncated at bracket length and polynomial degree, with `|t| = 0`, `|dt| = −1`.

use std::sync::Arc;

use crate::dgl::Dgl;
use crate::error::{Error, Result};
use crate::freelie::{tensor::word_parity, FreeLie, LieElement, Tensor};
use crate::rat::Rat;

/// `Σ tᵏ ⊗ poly[k] + Σ tᵏdt ⊗ dt[k]`; coefficients live in the tensor algebra so that
/// products of forms can be taken before the Lie projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyForm {
    pub poly: Vec<Tensor>,
    pub dt: Vec<Tensor>,
    /// Whether the polynomial cap discarded terms.
    pub dropped: bool,
}

impl PolyForm {
    pub fn is_zero(&self) -> bool {
        self.poly.iter().chain(&self.dt).all(|t| t.is_zero())
    }

    /// Highest power of `t` with a nonzero coefficient, counting `tᵏdt` as `k + 1`.
    pub fn poly_degree(&self) -> Option<usize> {
        let a = self.poly.iter().rposition(|t| !t.is_zero());
        let b = self.dt.iter().rposition(|t| !t.is_zero()).map(|k| k + 1);
        a.max(b)
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        self.combine(other, &Rat::one())
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.combine(other, &Rat::from_int(-1))
    }

    fn combine(&self, other: &PolyForm, c: &Rat) -> PolyForm {
        let mut out = self.clone();
        for (a, b) in out.poly.iter_mut().zip(&other.poly) {
            a.add_scaled(b, c);
        }
        for (a, b) in out.dt.iter_mut().zip(&other.dt) {
            a.add_scaled(b, c);
        }
        out.dropped |= other.dropped;
        out
    }

    pub fn scale(&self, c: &Rat) -> PolyForm {
        PolyForm { poly: self.poly.iter().map(|t| t.scaled(c)).collect(), dt: self.dt.iter().map(|t| t.scaled(c)).collect(), dropped: self.dropped }
    }
}

/// `L ⊗ Λ(t, dt)` with `d(a⊗x) = da⊗x + (−1)^{|a|} a⊗dx` and
/// `[a⊗x, a′⊗x′] = (−1)^{|a′||x|} aa′⊗[x, x′]`.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub dgl: Dgl,
    pub poly_cap: usize,
    d: Vec<Tensor>,
}

/// The cylinder on `l` with polynomials of degree at most `poly_cap`.
pub fn tensor_interval(l: &Dgl, poly_cap: usize) -> Result<Cylinder> {
    if poly_cap == 0 {
        return Err(Error::Usage("the polynomial cap must be at least 1".into()));
    }
    Ok(Cylinder { dgl: l.clone(), poly_cap, d: l.d_on_gens().iter().map(|e| e.terms().clone()).collect() })
}

impl Cylinder {
    fn lie(&self) -> &Arc<FreeLie> {
        self.dgl.lie()
    }

    pub fn zero(&self) -> PolyForm {
        PolyForm { poly: vec![Tensor::zero(); self.poly_cap + 1], dt: vec![Tensor::zero(); self.poly_cap], dropped: false }
    }

    /// `tᵏ ⊗ x`
    pub fn monomial(&self, k: usize, x: &LieElement) -> Result<PolyForm> {
        let mut f = self.zero();
        let slot = f.poly.get_mut(k).ok_or_else(|| Error::Resource(format!("t^{k} exceeds the polynomial cap {}", self.poly_cap)))?;
        *slot = x.terms().clone();
        Ok(f)
    }

    /// `tᵏdt ⊗ x`
    pub fn dt_monomial(&self, k: usize, x: &LieElement) -> Result<PolyForm> {
        let mut f = self.zero();
        let slot = f.dt.get_mut(k).ok_or_else(|| Error::Resource(format!("t^{k}dt exceeds the polynomial cap {}", self.poly_cap)))?;
        *slot = x.terms().clone();
        Ok(f)
    }

    pub fn constant(&self, x: &LieElement) -> PolyForm {
        self.monomial(0, x).expect("t⁰ is always in range")
    }

    /// `Σ_k (tᵏ/k!) ad_uᵏ(v)` up to the caps.
    pub fn exp_t_ad(&self, u: &LieElement, v: &LieElement) -> PolyForm {
        let mut f = self.zero();
        let mut term = v.clone();
        for k in 0..=self.poly_cap {
            if term.is_zero() {
                break;
            }
            f.poly[k] = term.terms().scaled(&Rat::inv_factorial(k));
            term = u.bracket(&term);
        }
        f.dropped = !term.is_zero();
        f
    }

    /// Associative product in `Λ(t, dt) ⊗ T(V)`: `(a⊗x)(a′⊗x′) = (−1)^{|x||a′|} aa′ ⊗ xx′`.
    fn mul(&self, a: &PolyForm, b: &PolyForm) -> PolyForm {
        let degs = self.lie().degs();
        let cap = self.lie().cap();
        let mut out = self.zero();
        out.dropped = a.dropped || b.dropped;
        let put = |out: &mut PolyForm, k: usize, dt: bool, (t, _): (Tensor, bool)| {
            let slot = if dt { out.dt.get_mut(k) } else { out.poly.get_mut(k) };
            match slot {
                Some(s) => s.add_scaled(&t, &Rat::one()),
                None => out.dropped |= !t.is_zero(),
            }
        };
        for (i, x) in a.poly.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.poly.iter().enumerate() {
                put(&mut out, i + j, false, x.mul(y, cap));
            }
            // dt passes x: sign (−1)^{|x|}
            let signed = odd_negated(x, degs);
            for (j, y) in b.dt.iter().enumerate() {
                put(&mut out, i + j, true, signed.mul(y, cap));
            }
        }
        for (i, x) in a.dt.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.poly.iter().enumerate() {
                put(&mut out, i + j, true, x.mul(y, cap));
            }
        }
        out
    }

    /// Graded commutator, termwise in the parity of each word.
    pub fn bracket(&self, a: &PolyForm, b: &PolyForm) -> PolyForm {
        let degs = self.lie().degs();
        let (a0, a1) = split_parity(a, degs);
        let (b0, b1) = split_parity(b, degs);
        let ab = self.mul(a, b);
        // ba with sign −(−1)^{|a||b|}: + only when both are odd.
        let mut out = ab.sub(&self.mul(&b0, a)).sub(&self.mul(&b1, &a0)).add(&self.mul(&b1, &a1));
        out.dropped |= a.dropped || b.dropped;
        out
    }

    fn d_tensor(&self, x: &Tensor) -> Tensor {
        x.apply_derivation(&self.d, -1, None, self.lie().degs(), self.lie().cap()).0
    }

    /// `d(tᵏ⊗x) = k tᵏ⁻¹dt⊗x + tᵏ⊗dx`, `d(tᵏdt⊗x) = −tᵏdt⊗dx`.
    pub fn differential(&self, f: &PolyForm) -> PolyForm {
        let mut out = self.zero();
        out.dropped = f.dropped;
        for (k, x) in f.poly.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let dx = self.d_tensor(x);
            out.poly[k].add_scaled(&dx, &Rat::one());
            if k > 0 {
                out.dt[k - 1].add_scaled(x, &Rat::from_int(k as i64));
            }
        }
        for (k, x) in f.dt.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let dx = self.d_tensor(x);
            out.dt[k].add_scaled(&dx, &Rat::from_int(-1));
        }
        out
    }

    /// Image of a source element under the algebra map with the given generator images.
    pub fn substitute(&self, e: &LieElement, images: &[PolyForm]) -> PolyForm {
        let mut unit = self.zero();
        unit.poly[0] = Tensor::unit();
        let mut out = self.zero();
        for (w, c) in e.terms().iter() {
            let mut acc = unit.clone();
            for l in w.iter() {
                acc = self.mul(&acc, &images[*l as usize]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    /// `t ↦ i`, `dt ↦ 0`.
    pub fn eval(&self, f: &PolyForm, endpoint: u8) -> Result<LieElement> {
        let t = match endpoint {
            0 => f.poly[0].clone(),
            1 => f.poly.iter().fold(Tensor::zero(), |mut acc, x| {
                acc.add_scaled(x, &Rat::one());
                acc
            }),
            _ => return Err(Error::Usage(format!("endpoint must be 0 or 1, not {endpoint}"))),
        };
        LieElement::try_from_tensor(self.lie(), t)
    }

    /// Whether every coefficient is a Lie element.
    pub fn is_lie(&self, f: &PolyForm) -> bool {
        let degs = self.lie().degs();
        f.poly.iter().chain(&f.dt).all(|t| t.is_lie(degs))
    }

    /// Whether every term has total degree `n`.
    pub fn is_of_degree(&self, f: &PolyForm, n: i64) -> bool {
        let degs = self.lie().degs();
        let ok = |t: &Tensor, shift: i64| t.iter().all(|(w, _)| crate::freelie::tensor::word_degree(w, degs) + shift == n);
        f.poly.iter().all(|t| ok(t, 0)) && f.dt.iter().all(|t| ok(t, -1))
    }

    pub fn render(&self, f: &PolyForm) -> String {
        let mut parts = Vec::new();
        let lie = self.lie();
        let show = |t: &Tensor| LieElement::try_from_tensor(lie, t.clone()).map(|e| e.to_expr_string()).unwrap_or_else(|_| "<non-Lie>".into());
        let power = |k: usize| match k {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{k}"),
        };
        for (k, x) in f.poly.iter().enumerate() {
            if !x.is_zero() {
                let p = power(k);
                parts.push(if p.is_empty() { show(x) } else { format!("{p}*({})", show(x)) });
            }
        }
        for (k, x) in f.dt.iter().enumerate() {
            if !x.is_zero() {
                let p = power(k);
                parts.push(if p.is_empty() { format!("dt*({})", show(x)) } else { format!("{p}*dt*({})", show(x)) });
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Words of odd degree negated.
fn odd_negated(x: &Tensor, degs: &[i64]) -> Tensor {
    let mut out = Tensor::zero();
    for (w, c) in x.iter() {
        out.add_term(w.clone(), &if word_parity(w, degs) { -c } else { c.clone() });
    }
    out
}

/// `(even part, odd part)` by total degree, `dt` counting as odd.
fn split_parity(f: &PolyForm, degs: &[i64]) -> (PolyForm, PolyForm) {
    let pick = |t: &Tensor, odd: bool| t.filter(|w| word_parity(w, degs) == odd);
    let even = PolyForm { poly: f.poly.iter().map(|t| pick(t, false)).collect(), dt: f.dt.iter().map(|t| pick(t, true)).collect(), dropped: f.dropped };
    let odd = PolyForm { poly: f.poly.iter().map(|t| pick(t, true)).collect(), dt: f.dt.iter().map(|t| pick(t, false)).collect(), dropped: f.dropped };
    (even, odd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgl::builtins;

    #[test]
    fn leibniz_on_monomials() {
        let l = builtins::circle(4).unwrap();
        let cyl = tensor_interval(&l, 3).unwrap();
        let x = l.gen("x").unwrap();
        let b = l.gen("b").unwrap();
        // d(t⊗x) = dt⊗x + t⊗dx
        let d = cyl.differential(&cyl.monomial(1, &x).unwrap());
        let expect = cyl.dt_monomial(0, &x).unwrap().add(&cyl.monomial(1, &l.differential(&x)).unwrap());
        assert_eq!(d, expect);
        // d(dt⊗b) = −dt⊗db
        let d = cyl.differential(&cyl.dt_monomial(0, &b).unwrap());
        assert_eq!(d, cyl.dt_monomial(0, &l.differential(&b).neg()).unwrap());
    }

    #[test]
    fn bracket_signs() {
        let l = builtins::wedge(&[2, 2], 3).unwrap();
        let cyl = tensor_interval(&l, 3).unwrap();
        let (x, y) = (l.gen("x").unwrap(), l.gen("y").unwrap());
        let tx = cyl.monomial(1, &x).unwrap();
        let ty = cyl.monomial(1, &y).unwrap();
        assert_eq!(cyl.bracket(&tx, &ty), cyl.monomial(2, &x.bracket(&y)).unwrap());
        // [t⊗x, dt⊗y] = (−1)^{|x|} t dt⊗[x,y] with |x| = 1
        let dty = cyl.dt_monomial(0, &y).unwrap();
        assert_eq!(cyl.bracket(&tx, &dty), cyl.dt_monomial(1, &x.bracket(&y).neg()).unwrap());
        assert!(cyl.bracket(&dty, &cyl.dt_monomial(0, &x).unwrap()).is_zero());
    }

    #[test]
    fn differential_squares_to_zero() {
        let l = builtins::circle(4).unwrap();
        let cyl = tensor_interval(&l, 4).unwrap();
        let (x, b) = (l.gen("x").unwrap(), l.gen("b").unwrap());
        let f = cyl.monomial(2, &x).unwrap().add(&cyl.dt_monomial(1, &x.bracket(&b)).unwrap()).add(&cyl.monomial(3, &b).unwrap());
        assert!(cyl.differential(&cyl.differential(&f)).is_zero());
    }

    #[test]
    fn endpoints() {
        let l = builtins::wedge(&[1, 1], 4).unwrap();
        let cyl = tensor_interval(&l, 6).unwrap();
        let (u, v) = (l.gen("u").unwrap(), l.gen("v").unwrap());
        let f = cyl.monomial(1, &u).unwrap().add(&cyl.dt_monomial(0, &v).unwrap());
        assert!(cyl.eval(&f, 0).unwrap().is_zero());
        assert_eq!(cyl.eval(&f, 1).unwrap(), u);
        let e = cyl.exp_t_ad(&u, &v);
        assert_eq!(cyl.eval(&e, 0).unwrap(), v);
        assert_eq!(cyl.eval(&e, 1).unwrap(), crate::dgl::exp_ad(&u, &v));
        assert!(!e.dropped);
    }
}
