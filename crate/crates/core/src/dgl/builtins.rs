// SPDX-License-Identifier: Apache-2.0
//! Built-in models: the point, the interval, the circle, spheres and wedges.

use super::presentation::Dgl;
use crate::error::{Error, Result};
use crate::freelie::{FreeLie, Generator, LieElement};
use crate::rat::{bernoulli, Rat};

pub const DEFAULT_CAP: usize = 5;

fn mc_square(a: &LieElement) -> LieElement {
    a.bracket(a).scale(&Rat::new(-1, 2))
}

/// One MC generator `a`, `da = −½[a,a]`.
pub fn point(cap: usize) -> Result<Dgl> {
    let lie = FreeLie::new(vec![Generator::new("a", -1)], cap)?;
    let a = LieElement::generator(&lie, 0);
    Dgl::build(lie, vec![mc_square(&a)])
}

/// The interval: vertices `a`, `b` and the edge `x` with the Bernoulli-series differential.
pub fn interval(cap: usize) -> Result<Dgl> {
    interval_with_bernoulli(cap, &bernoulli(cap))
}

/// The interval with the series coefficients `bn[n]/n!` supplied by the caller.
pub fn interval_with_bernoulli(cap: usize, bn: &[Rat]) -> Result<Dgl> {
    let lie = FreeLie::new(vec![Generator::new("a", -1), Generator::new("b", -1), Generator::new("x", 0)], cap)?;
    let a = LieElement::generator(&lie, 0);
    let b = LieElement::generator(&lie, 1);
    let x = LieElement::generator(&lie, 2);
    let mut dx = x.bracket(&b);
    let mut term = b.sub(&a);
    for (n, bn) in bn.iter().enumerate().take(cap) {
        if !bn.is_zero() {
            dx = dx.add(&term.scale(&(bn * &Rat::inv_factorial(n))));
        }
        term = x.bracket(&term);
    }
    Dgl::build(lie, vec![mc_square(&a), mc_square(&b), dx])
}

/// The circle: `db = −½[b,b]`, `dx = [x,b]`.
pub fn circle(cap: usize) -> Result<Dgl> {
    let lie = FreeLie::new(vec![Generator::new("b", -1), Generator::new("x", 0)], cap)?;
    let b = LieElement::generator(&lie, 0);
    let x = LieElement::generator(&lie, 1);
    Dgl::build(lie, vec![mc_square(&b), x.bracket(&b)])
}

/// Minimal model of Sⁿ: one generator of degree n−1, zero differential.
pub fn sphere(n: i64, cap: usize) -> Result<Dgl> {
    wedge(&[n], cap)
}

/// Wedge of spheres: one generator of degree nᵢ−1 per sphere, zero differential.
pub fn wedge(dims: &[i64], cap: usize) -> Result<Dgl> {
    if dims.is_empty() {
        return Err(Error::Usage("wedge needs at least one sphere".into()));
    }
    if let Some(n) = dims.iter().find(|n| **n < 1) {
        return Err(Error::Usage(format!("sphere dimension {n} must be at least 1")));
    }
    let letters: &[&str] = if dims.iter().all(|n| *n == 1) { &["u", "v", "w"] } else { &["x", "y", "z"] };
    let gens = dims
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let name = if dims.len() <= letters.len() { letters[i].to_string() } else { format!("{}{}", letters[0], i + 1) };
            Generator::new(&name, n - 1)
        })
        .collect();
    Ok(Dgl::free(FreeLie::new(gens, cap)?))
}

/// Looks up a built-in by name with integer parameters.
pub fn builtin(name: &str, params: &[i64], cap: usize) -> Result<Dgl> {
    match (name, params) {
        ("L0", []) => point(cap),
        ("L1", []) => interval(cap),
        ("S1", []) => circle(cap),
        ("sphere", [n]) => sphere(*n, cap),
        ("wedge", ns) if !ns.is_empty() => wedge(ns, cap),
        _ => Err(Error::Usage(format!("unknown built-in model {name}({})", params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")))),
    }
}

pub const BUILTIN_NAMES: [&str; 5] = ["L0", "L1", "S1", "sphere", "wedge"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        point(5).unwrap();
        circle(6).unwrap();
        interval(5).unwrap();
        let s3 = sphere(3, 5).unwrap();
        assert_eq!(s3.gens()[0].degree, 2);
        assert_eq!(s3.dim(2), 1);
        assert_eq!(s3.dim(4), 0);
        let w = wedge(&[1, 1], 3).unwrap();
        assert_eq!(w.gens().iter().map(|g| g.name.as_str()).collect::<Vec<_>>(), ["u", "v"]);
        assert!(builtin("torus", &[], 3).is_err());
        assert!(builtin("sphere", &[0], 3).is_err());
    }

    #[test]
    fn interval_vertices_are_mc() {
        let l = interval(6).unwrap();
        for v in ["a", "b"] {
            assert!(l.check_mc(&l.gen(v).unwrap()).unwrap().0);
        }
    }

    #[test]
    fn bernoulli_sign_is_forced() {
        let mut bn = bernoulli(6);
        bn[1] = -&bn[1];
        assert!(matches!(interval_with_bernoulli(6, &bn), Err(Error::IllFormedDifferential { .. })));
    }
}
