// SPDX-License-Identifier: Apache-2.0
//! Degree-0 derivation subspaces attached to subgroups of homotopy classes of automorphisms.

use std::fmt;

use super::space::DerSpace;
use crate::dgl::{exp_derivation, log_automorphism, Derivation, Dgl, DglMorphism};
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, SparseMat, SparseVec};
use crate::freelie::LieElement;

/// `V = V⁰ ⊃ V¹ ⊃ …` spanned by generators; `levels[g]` is the largest i with g ∈ Vⁱ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFiltration {
    pub name: String,
    pub levels: Vec<usize>,
}

impl GeneratorFiltration {
    /// `blocks[i]` lists the generators of level `i + 1`; unlisted generators have level 0.
    pub fn new(l: &Dgl, name: &str, blocks: &[Vec<String>]) -> Result<GeneratorFiltration> {
        let mut levels = vec![0; l.lie().rank()];
        for (i, block) in blocks.iter().enumerate() {
            for g in block {
                let k = l.lie().index_of(g).ok_or_else(|| Error::InvalidSubgroup(format!("filtration {name} names unknown generator {g}")))?;
                if levels[k] != 0 {
                    return Err(Error::InvalidSubgroup(format!("filtration {name} lists {g} twice")));
                }
                levels[k] = i + 1;
            }
        }
        Ok(GeneratorFiltration { name: name.to_string(), levels })
    }

    /// Whether a length-one value `h` is allowed for generator `g`: `h ∈ V^{level(g)+1}`.
    pub fn allows(&self, g: usize, h: usize) -> bool {
        self.levels[h] > self.levels[g]
    }
}

#[derive(Clone, Debug)]
pub enum GSpec {
    /// The trivial subgroup.
    Identity,
    /// All classes of automorphisms raising the generator filtration.
    Stabilizer(GeneratorFiltration),
    /// Logarithms given by a list of degree-0 derivations.
    Span(Vec<(String, Derivation)>),
}

impl fmt::Display for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSpec::Identity => f.write_str("identity"),
            GSpec::Stabilizer(filt) => write!(f, "stabilizer:{}", filt.name),
            GSpec::Span(ds) => write!(f, "span:{}", ds.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(",")),
        }
    }
}

/// Free classes (`𝒢`) or pointed classes (`Π`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Free,
    Pointed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Free => "free",
            Mode::Pointed => "pointed",
        })
    }
}

/// Basis of the degree-0 part of `Der^𝒢` or `Der^Π`, with its distinguished subspace.
#[derive(Clone, Debug)]
pub struct DerGZero {
    /// Coordinates in `Der₀`.
    pub basis: Vec<SparseVec>,
    /// `R₀ = D(Der₁) + ad Z₀(L)` (free) or `D(Der₁)` (pointed), in `Der₀` coordinates.
    pub r0: Vec<SparseVec>,
    /// SPAN only: whether conjugation by `exp(R₀)` preserves the span.
    pub saturated: Option<bool>,
    /// Whether the filtration condition alone already contained `R₀`.
    pub contains_r0_unaided: bool,
}

fn independent(vs: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    vs.into_iter().filter(|v| !v.is_zero() && e.insert(v)).collect()
}

fn in_span(basis: &[SparseVec], v: &SparseVec) -> bool {
    let mut e = Echelon::new();
    for b in basis {
        e.insert(b);
    }
    e.contains(v)
}

fn describe(space: &DerSpace, v: &SparseVec) -> String {
    crate::exactlin::describe_combination(&space.labels(0), v)
}

/// `R₀` in `Der₀` coordinates.
pub fn r_zero(space: &DerSpace, mode: Mode) -> Result<Vec<SparseVec>> {
    let mut vs = Vec::new();
    for theta in space.basis_elements(1) {
        vs.push(space.coordinates(&space.boundary(&theta))?);
    }
    if mode == Mode::Free {
        let l = space.target();
        let d0 = l.boundary_matrix(0)?;
        let gb = l.lie().graded_basis(0);
        for z in d0.kernel() {
            vs.push(space.coordinates(&space.ad(&gb.combine(&z))?)?);
        }
    }
    Ok(independent(vs))
}

/// Degree-0 D-cycles of `Der L` whose values respect the filtration.
fn stabilizer(space: &DerSpace, filt: &GeneratorFiltration) -> Result<Vec<SparseVec>> {
    let lie = space.target().lie();
    let basis = space.basis(0);
    let mut allowed = Vec::new();
    for (k, (g, j)) in basis.iter().enumerate() {
        let gb = lie.graded_basis(lie.gens()[*g].degree);
        let ok = if gb.length_of(*j) >= 2 {
            true
        } else {
            let w = gb.element(*j);
            let h = w.terms().iter().next().map(|(word, _)| word[0] as usize).expect("nonzero basis element");
            filt.allows(*g, h)
        };
        if ok {
            allowed.push(k);
        }
    }
    let cols = allowed.iter().map(|k| space.coordinates(&space.boundary(&space.basis_element(0, basis[*k])))).collect::<Result<Vec<_>>>()?;
    let dmat = SparseMat::from_columns(space.dim(-1), cols)?;
    Ok(dmat.kernel().into_iter().map(|z| z.remap(|i| Some(allowed[i]))).collect())
}

/// Basis of `Der^𝒢₀` (free) or `Der^Π₀` (pointed) for a spec on `Der L`.
pub fn der_g_zero(l: &Dgl, spec: &GSpec, mode: Mode) -> Result<DerGZero> {
    let space = DerSpace::of(l);
    let r0 = r_zero(&space, mode)?;
    let (found, saturated) = match spec {
        GSpec::Identity => (Vec::new(), None),
        GSpec::Stabilizer(filt) => {
            if filt.levels.len() != l.lie().rank() {
                return Err(Error::InvalidSubgroup(format!("filtration {} does not match the model", filt.name)));
            }
            (stabilizer(&space, filt)?, None)
        }
        GSpec::Span(ds) => {
            let mut vs = Vec::new();
            for (name, theta) in ds {
                if theta.degree != 0 {
                    return Err(Error::InvalidSubgroup(format!("{name} has degree {}, not 0", theta.degree)));
                }
                if !space.boundary(theta).is_zero() {
                    return Err(Error::InvalidSubgroup(format!("{name} is not a D-cycle")));
                }
                vs.push(space.coordinates(theta)?);
            }
            (vs, Some(false))
        }
    };
    let contains_r0_unaided = r0.iter().all(|r| in_span(&found, r));
    let basis = independent(found.iter().cloned().chain(r0.iter().cloned()));
    let elems: Vec<Derivation> = basis.iter().map(|v| space.combine(0, v)).collect();

    if let GSpec::Span(_) = spec {
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i + 1..] {
                if !in_span(&basis, &space.coordinates(&a.bracket(b))?) {
                    return Err(Error::InvalidSubgroup(
                        "the span together with R₀ is not closed under the bracket, so its exponentials do not form a group".into(),
                    ));
                }
            }
        }
    }
    if mode == Mode::Pointed {
        let gb = l.lie().graded_basis(0);
        for x in gb.elements() {
            let ad = space.ad(&x)?;
            for a in &elems {
                if !in_span(&basis, &space.coordinates(&ad.bracket(a))?) {
                    return Err(Error::InvalidSubgroup("the pointed span is not stable under the H₀(L) action".into()));
                }
            }
        }
    }
    // Every basis derivation must exponentiate to an automorphism with log(exp θ) = θ.
    let lie = l.lie();
    let mut autos = Vec::new();
    for (v, theta) in basis.iter().zip(&elems) {
        let images = exp_derivation(lie, theta)?;
        DglMorphism::new(l.clone(), l.clone(), images.clone())
            .map_err(|e| Error::InvalidSubgroup(format!("exp of {} is not a dgl automorphism: {e}", describe(&space, v))))?;
        if log_automorphism(lie, &images)? != *theta {
            return Err(Error::Internal("log(exp θ) differs from θ".into()));
        }
        autos.push(images);
    }
    let saturated = match saturated {
        Some(_) => Some(conjugation_closed(l, &space, &basis, &r0, &autos)?),
        None => None,
    };
    Ok(DerGZero { basis, r0, saturated, contains_r0_unaided })
}

/// Whether `log(e^r e^θ e^{−r})` stays in the span for every `r ∈ R₀` and basis `θ`.
fn conjugation_closed(l: &Dgl, space: &DerSpace, basis: &[SparseVec], r0: &[SparseVec], autos: &[Vec<LieElement>]) -> Result<bool> {
    let lie = l.lie();
    for r in r0 {
        let rd = space.combine(0, r);
        let er = exp_derivation(lie, &rd)?;
        let er_inv = exp_derivation(lie, &rd.scale(&crate::rat::Rat::from_int(-1)))?;
        for a in autos {
            // (e^r ∘ a ∘ e^{−r})(g) = e^r(a(e^{−r}(g)))
            let images: Vec<LieElement> = er_inv.iter().map(|v| v.substitute(a, lie).substitute(&er, lie)).collect();
            let log = log_automorphism(lie, &images)?;
            if !in_span(basis, &space.coordinates(&log)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgl::builtins;

    #[test]
    fn odd_sphere_identity_is_zero() {
        let l = builtins::sphere(3, 4).unwrap();
        let g = der_g_zero(&l, &GSpec::Identity, Mode::Free).unwrap();
        assert!(g.basis.is_empty());
    }

    #[test]
    fn even_sphere_identity_is_zero() {
        let l = builtins::sphere(2, 4).unwrap();
        let g = der_g_zero(&l, &GSpec::Identity, Mode::Free).unwrap();
        assert!(g.basis.is_empty());
    }

    #[test]
    fn wedge_stabilizer_is_one_dimensional() {
        let l = builtins::wedge(&[3, 3], 4).unwrap();
        let filt = GeneratorFiltration::new(&l, "F", &[vec!["y".into()]]).unwrap();
        let g = der_g_zero(&l, &GSpec::Stabilizer(filt), Mode::Free).unwrap();
        assert_eq!(g.basis.len(), 1);
        let theta = DerSpace::of(&l).combine(0, &g.basis[0]);
        assert_eq!(theta.values, vec![l.gen("y").unwrap(), LieElement::zero(l.lie())]);
    }

    fn elementary(l: &Dgl, from: &str, to: &str) -> Derivation {
        let values = l.gens().iter().map(|g| if g.name == from { l.gen(to).unwrap() } else { LieElement::zero(l.lie()) }).collect();
        Derivation { degree: 0, values }
    }

    #[test]
    fn span_must_close_under_brackets() {
        let l = builtins::wedge(&[3, 3], 4).unwrap();
        let up = elementary(&l, "x", "y");
        let down = elementary(&l, "y", "x");
        let g = der_g_zero(&l, &GSpec::Span(vec![("up".into(), up.clone())]), Mode::Free).unwrap();
        assert_eq!(g.basis.len(), 1);
        assert_eq!(g.saturated, Some(true));
        let r = der_g_zero(&l, &GSpec::Span(vec![("up".into(), up), ("down".into(), down)]), Mode::Free);
        assert!(matches!(r, Err(Error::InvalidSubgroup(_))));
    }

    #[test]
    fn non_nilpotent_span_diverges() {
        let l = builtins::wedge(&[3, 3], 4).unwrap();
        let id = Derivation { degree: 0, values: vec![l.gen("x").unwrap(), l.gen("y").unwrap()] };
        assert!(matches!(der_g_zero(&l, &GSpec::Span(vec![("id".into(), id)]), Mode::Free), Err(Error::Divergence(_))));
    }
}
