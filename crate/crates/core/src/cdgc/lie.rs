// SPDX-License-Identifier: Apache-2.0
//! Quillen's `ℒ(C) = (𝕃(s⁻¹C̄), d₁ + d₂)` and the counit `α: ℒ𝒞(L) → L`.

use std::collections::BTreeMap;

use super::chains::Chains;
use super::coalgebra::Cdgc;
use crate::dgl::{Dgl, DglMorphism};
use crate::error::{Error, Result};
use crate::exactlin::{GradedChainComplex, SparseMat, SparseVec};
use crate::freelie::{FreeLie, Generator, LieElement};
use crate::rat::Rat;

/// `ℒ(C)` truncated at bracket length `cap`; generator `k` is `s⁻¹` of the `k`-th
/// non-unit basis element of `C`.
#[derive(Clone, Debug)]
pub struct LieOfCoalgebra {
    pub dgl: Dgl,
    /// Coalgebra basis index of each generator.
    pub source_index: Vec<usize>,
}

pub fn lie_functor(c: &Cdgc, cap: usize) -> Result<LieOfCoalgebra> {
    c.verify()?;
    let source_index: Vec<usize> = (0..c.dim()).filter(|i| *i != c.unit).collect();
    let mut gen_of = vec![usize::MAX; c.dim()];
    for (k, i) in source_index.iter().enumerate() {
        gen_of[*i] = k;
    }
    let gens = source_index.iter().map(|i| Generator::new(&format!("s^-1({})", c.labels[*i]), c.degrees[*i] - 1)).collect();
    let lie = FreeLie::new(gens, cap)?;
    let g = |i: usize| LieElement::generator(&lie, gen_of[i]);
    let mut d = Vec::new();
    for i in &source_index {
        // d₁(s⁻¹c) = −s⁻¹dc
        let mut v = LieElement::zero(&lie);
        for (j, x) in c.diff[*i].iter() {
            if j != c.unit {
                v.add_scaled(&g(j), &-x);
            }
        }
        // d₂(s⁻¹c) = ½ Σ (−1)^{|a|} [s⁻¹a, s⁻¹b] over Δ̄c = Σ a ⊗ b
        for (a, b, x) in c.reduced_coproduct(*i) {
            let coeff = &(x * Rat::new(1, 2)) * &Rat::sign(c.degrees[a]);
            v.add_scaled(&g(a).bracket(&g(b)), &coeff);
        }
        d.push(v);
    }
    let dgl = Dgl::build(lie, d).map_err(|e| match e {
        Error::IllFormedDifferential { generator, length, witness } => {
            Error::IllFormedCoalgebra(format!("d² on {generator} has a length-{length} term {witness}"))
        }
        other => other,
    })?;
    Ok(LieOfCoalgebra { dgl, source_index })
}

/// `α: ℒ𝒞(L) → L`, `s⁻¹sx ↦ x` and zero on longer words.
pub fn alpha(chains: &Chains, lc: &LieOfCoalgebra, l: &Dgl) -> Result<DglMorphism> {
    let ones: std::collections::BTreeMap<usize, LieElement> = chains.generators_of_length_one(l).into_iter().collect();
    let images = lc
        .source_index
        .iter()
        .map(|i| ones.get(i).cloned().unwrap_or_else(|| LieElement::zero(l.lie())))
        .collect();
    DglMorphism::new(lc.dgl.clone(), l.clone(), images).map_err(|e| Error::Internal(format!("α is not a dgl morphism: {e}")))
}

/// `β: C → 𝒞ℒ(C)`, `c ↦ ε(c) + Σₖ (1/k!) ss⁻¹c₁ ∧ … ∧ ss⁻¹cₖ` over `Δ̄⁽ᵏ⁻¹⁾c`,
/// as coordinates in the basis of `chains`, which must be built on `lc.dgl`.
pub fn beta(c: &Cdgc, lc: &LieOfCoalgebra, chains: &Chains) -> Result<Vec<SparseVec>> {
    let lie = lc.dgl.lie();
    // ss⁻¹c for each non-unit basis element, as a combination of sL basis positions.
    let mut lifted: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
    for (k, i) in lc.source_index.iter().enumerate() {
        let g = LieElement::generator(lie, k);
        let n = c.degrees[*i] - 1;
        let coords = lie.graded_basis(n).coordinates(&g)?;
        let pos = coords
            .iter()
            .map(|(j, x)| chains.suspended_index(n, j).map(|t| (t, x.clone())).ok_or_else(|| Error::Internal("generator missing from sL".into())))
            .collect::<Result<Vec<_>>>()?;
        lifted.insert(*i, pos);
    }
    let mut out = Vec::with_capacity(c.dim());
    for i in 0..c.dim() {
        let mut v = SparseVec::new();
        if i == c.unit {
            v.add_at(chains.index_of(&[]).expect("empty word"), &Rat::one());
            out.push(v);
            continue;
        }
        // Iterated reduced coproduct, one level at a time.
        let mut level: Vec<(Vec<usize>, Rat)> = vec![(vec![i], Rat::one())];
        for k in 1..=chains.word_cap {
            let scale = Rat::inv_factorial(k);
            for (factors, x) in &level {
                // Expand the product of lifts into wedge words.
                let mut words: Vec<(Vec<usize>, Rat)> = vec![(Vec::new(), x * &scale)];
                for f in factors {
                    let mut next = Vec::new();
                    for (w, a) in &words {
                        for (t, b) in &lifted[f] {
                            if let Some((s, nw)) = chains.wedge(w, &[*t]) {
                                next.push((nw, &(a * b) * &s));
                            }
                        }
                    }
                    words = next;
                }
                for (w, a) in words {
                    let idx = chains.index_of(&w).ok_or_else(|| Error::Internal(format!("word {w:?} missing")))?;
                    v.add_at(idx, &a);
                }
            }
            let mut next = Vec::new();
            for (factors, x) in &level {
                for (a, b, y) in c.reduced_coproduct(factors[0]) {
                    let mut nf = vec![a, b];
                    nf.extend_from_slice(&factors[1..]);
                    next.push((nf, x * &y));
                }
            }
            if next.is_empty() {
                break;
            }
            level = next;
        }
        out.push(v);
    }
    Ok(out)
}

/// Checks that `β` commutes with differentials and coproducts.
pub fn verify_beta(c: &Cdgc, chains: &Chains, images: &[SparseVec]) -> Result<()> {
    let target = &chains.cdgc;
    let apply = |v: &SparseVec| {
        let mut out = SparseVec::new();
        for (j, x) in v.iter() {
            out.add_scaled(&images[j], x);
        }
        out
    };
    for i in 0..c.dim() {
        let mut d_after = SparseVec::new();
        for (j, x) in images[i].iter() {
            d_after.add_scaled(&target.diff[j], x);
        }
        if d_after != apply(&c.diff[i]) {
            return Err(Error::NotMorphism(format!("β does not commute with d on {}", c.labels[i])));
        }
        let mut lhs: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (j, x) in images[i].iter() {
            for (a, b, y) in &target.comul[j] {
                *lhs.entry((*a, *b)).or_default() += &(x * y);
            }
        }
        let mut rhs: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (a, b, y) in &c.comul[i] {
            for (p, u) in images[*a].iter() {
                for (q, w) in images[*b].iter() {
                    *rhs.entry((p, q)).or_default() += &(&(y * u) * w);
                }
            }
        }
        lhs.retain(|_, x| !x.is_zero());
        rhs.retain(|_, x| !x.is_zero());
        if lhs != rhs {
            return Err(Error::NotMorphism(format!("β does not commute with Δ on {}", c.labels[i])));
        }
    }
    Ok(())
}

/// Matrix of a dgl morphism in degree `n` between graded bases.
pub fn morphism_matrix(f: &DglMorphism, n: i64) -> Result<SparseMat> {
    let src = f.source.lie().graded_basis(n);
    let dst = f.target.lie().graded_basis(n);
    let cols = (0..src.dim()).map(|j| dst.coordinates(&f.apply(&src.element(j)))).collect::<Result<Vec<_>>>()?;
    SparseMat::from_columns(dst.dim(), cols)
}

/// Per-degree comparison of `H(ℒ𝒞(L))` and `H(L)` through `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaComparison {
    pub degree: i64,
    pub dim_source: usize,
    pub dim_target: usize,
    /// Rank of the induced map on homology.
    pub induced_rank: usize,
}

impl AlphaComparison {
    pub fn is_iso(&self) -> bool {
        self.dim_source == self.dim_target && self.induced_rank == self.dim_source
    }
}

pub fn compare_homology(f: &DglMorphism, lo: i64, hi: i64) -> Result<Vec<AlphaComparison>> {
    let a: GradedChainComplex = f.source.chain_complex(lo, hi)?;
    let b: GradedChainComplex = f.target.chain_complex(lo, hi)?;
    let mut out = Vec::new();
    for n in lo..=hi {
        let ha = a.homology_at(n)?;
        let hb = b.homology_at(n)?;
        let m = morphism_matrix(f, n)?;
        let cols = ha
            .cycle_reps
            .iter()
            .map(|z| hb.class_coordinates(&m.mul_vec(z)?, b.dim(n)))
            .collect::<Result<Vec<_>>>()?;
        let induced = SparseMat::from_columns(hb.dimension, cols)?;
        out.push(AlphaComparison { degree: n, dim_source: ha.dimension, dim_target: hb.dimension, induced_rank: induced.rank() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgl::builtins;

    #[test]
    fn trivial_coalgebra_gives_trivial_lie_algebra() {
        let c = Cdgc {
            labels: vec!["1".into()],
            degrees: vec![0],
            unit: 0,
            comul: vec![vec![(0, 0, Rat::one())]],
            diff: vec![Default::default()],
            meta: Vec::new(),
        };
        assert_eq!(lie_functor(&c, 3).unwrap().dgl.lie().rank(), 0);
    }

    #[test]
    fn handmade_quadratic_part() {
        let one = Rat::one();
        let c = Cdgc {
            labels: vec!["1".into(), "c".into(), "c'".into()],
            degrees: vec![0, 2, 4],
            unit: 0,
            comul: vec![
                vec![(0, 0, one.clone())],
                vec![(0, 1, one.clone()), (1, 0, one.clone())],
                vec![(0, 2, one.clone()), (2, 0, one.clone()), (1, 1, one.clone())],
            ],
            diff: vec![Default::default(); 3],
            meta: Vec::new(),
        };
        let lc = lie_functor(&c, 3).unwrap();
        let g = LieElement::generator(lc.dgl.lie(), 0);
        assert_eq!(lc.dgl.d_on_gens()[1], g.bracket(&g).scale(&Rat::new(1, 2)));
    }

    #[test]
    fn beta_is_a_dgc_morphism() {
        let c = crate::cdgc::coalgebra::tests::handmade();
        let lc = lie_functor(&c, 3).unwrap();
        let ch = Chains::build(&lc.dgl, 3).unwrap();
        let b = beta(&c, &lc, &ch).unwrap();
        verify_beta(&c, &ch, &b).unwrap();

        let l = builtins::sphere(3, 3).unwrap();
        let c = Chains::build(&l, 2).unwrap().cdgc;
        let lc = lie_functor(&c, 3).unwrap();
        let ch = Chains::build(&lc.dgl, 3).unwrap();
        verify_beta(&c.clone(), &ch, &beta(&c, &lc, &ch).unwrap()).unwrap();
    }

    #[test]
    fn alpha_on_odd_sphere_is_an_isomorphism() {
        let l = builtins::sphere(3, 4).unwrap();
        let ch = Chains::build(&l, 4).unwrap();
        let lc = lie_functor(&ch.cdgc, 4).unwrap();
        assert_eq!(lc.dgl.lie().rank(), 1);
        let a = alpha(&ch, &lc, &l).unwrap();
        assert_eq!(a.images[0], l.gen("x").unwrap());
    }

    #[test]
    fn alpha_on_even_sphere_is_a_quasi_isomorphism() {
        let l = builtins::sphere(2, 5).unwrap();
        let ch = Chains::build(&l, 4).unwrap();
        let lc = lie_functor(&ch.cdgc, 5).unwrap();
        let a = alpha(&ch, &lc, &l).unwrap();
        for row in compare_homology(&a, 0, 4).unwrap() {
            assert!(row.is_iso(), "{row:?}");
        }
    }
}
