// SPDX-License-Identifier: Apache-2.0
//! Homotopy groups of mapping spaces and invariants of classifying spaces of automorphisms.

use super::gspec::{der_g_zero, r_zero, GSpec, Mode};
use super::space::{der_complex, DerComplex, DerSpace};
use super::twisted::{DerSl, LDer, TwistedComplex};
use crate::cdgc::{mc_of_morphism, Chains, Convolution};
use crate::dgl::{exp_derivation, log_automorphism, postnikov_truncate, Derivation, Dgl, DglMorphism};
use crate::error::{Error, Result};
use crate::exactlin::{solve_linear, Echelon, GradedChainComplex, LongExactSequence, SparseMat, SparseVec};
use crate::freelie::LieElement;
use crate::rat::Rat;

/// `π_n` of `map*_f` and `map_f` for `n ≥ 1`, with `H₀` of the twisted product kept apart.
#[derive(Clone, Debug)]
pub struct MappingSpaceReport {
    pub cap: usize,
    /// `H_n(Der_φ(L′, L))`
    pub pointed: Vec<(i64, usize)>,
    /// `H_n(Der_φ(L′, L) ×̃ sL)`, degree 1 taken in the 1-connected cover.
    pub free: Vec<(i64, usize)>,
    /// `H₀(Der_φ ×̃ sL)`: components of the fibre, not a homotopy group.
    pub fiber_components: usize,
    pub les: LongExactSequence,
    /// Whether the source differential is decomposable.
    pub source_minimal: bool,
    pub total: TwistedComplex,
}

/// Whether every generator's differential has no linear part.
pub fn is_minimal(l: &Dgl) -> bool {
    l.d_on_gens().iter().all(|d| d.min_length().is_none_or(|k| k >= 2))
}

pub fn mapping_space_pi(phi: &DglMorphism, lo: i64, hi: i64) -> Result<MappingSpaceReport> {
    if lo > hi {
        return Err(Error::Usage(format!("empty degree window {lo}..{hi}")));
    }
    let lo = lo.max(1);
    let les_lo = 0.min(lo);
    let (from, to) = (les_lo - 2, hi + 2);
    let der = der_complex(&phi.source, &phi.target, Some(phi), from, to)?;
    let pointed = der.chain_complex()?.homology_dims(lo, hi)?;
    let total = DerSl::new(der).complex()?;
    let free = total.total.cover(1).homology_dims(lo, hi)?;
    let fiber_components = total.total.homology_at(0)?.dimension;
    let les = total.les(les_lo, hi)?;
    Ok(MappingSpaceReport { cap: phi.target.cap(), pointed, free, fiber_components, les, source_minimal: is_minimal(&phi.source), total })
}

/// `H_{n−1}(Hom(𝒞(L′), L), D_φ̄)` for `n` in `lo..=hi`, on chains capped at `word_cap`.
pub fn convolution_route(phi: &DglMorphism, word_cap: usize, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>> {
    let chains = Chains::build(&phi.source, word_cap)?;
    let conv = Convolution::new(chains.cdgc.clone(), phi.target.clone(), false);
    let m = mc_of_morphism(&chains, phi, &conv);
    let c = conv.chain_complex(lo - 1, hi - 1, Some(&m))?;
    (lo..=hi).map(|n| Ok((n, if c.total_dim() == 0 { 0 } else { c.homology_at(n - 1)?.dimension }))).collect()
}

/// `Der₀`-classes modulo `R₀` under `θ·η = log(e^θ ∘ e^η)`.
#[derive(Clone, Debug)]
pub struct AutGroup {
    space: DerSpace,
    reps: Vec<Derivation>,
    /// Columns: representatives, then `R₀`; all in `Der₀` coordinates.
    frame: SparseMat,
    constants: Vec<Vec<SparseVec>>,
}

impl AutGroup {
    fn new(space: DerSpace, basis: &[SparseVec], r0: &[SparseVec]) -> Result<AutGroup> {
        let mut e = Echelon::new();
        for r in r0 {
            e.insert(r);
        }
        let reps_coords: Vec<SparseVec> = basis.iter().filter(|v| e.insert(v)).cloned().collect();
        let frame = SparseMat::from_columns(space.dim(0), reps_coords.iter().chain(r0).cloned().collect())?;
        let reps: Vec<Derivation> = reps_coords.iter().map(|v| space.combine(0, v)).collect();
        let mut g = AutGroup { space, reps, frame, constants: Vec::new() };
        let mut constants = Vec::new();
        for a in &g.reps {
            constants.push(g.reps.iter().map(|b| g.class_of(&a.bracket(b))).collect::<Result<Vec<_>>>()?);
        }
        g.constants = constants;
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Derivation] {
        &self.reps
    }

    pub fn labels(&self) -> Vec<String> {
        let full = self.space.labels(0);
        self.reps
            .iter()
            .map(|r| self.space.coordinates(r).map(|v| crate::exactlin::describe_combination(&full, &v)).unwrap_or_default())
            .collect()
    }

    pub fn structure_constants(&self) -> &[Vec<SparseVec>] {
        &self.constants
    }

    /// Class coordinates of a degree-0 derivation in the span of representatives and `R₀`.
    pub fn class_of(&self, theta: &Derivation) -> Result<SparseVec> {
        let v = self.space.coordinates(theta)?;
        let x = solve_linear(&self.frame, &v)?.ok_or(Error::NotInSpan)?;
        Ok(SparseVec::from_pairs(x.iter().filter(|(i, _)| *i < self.reps.len()).map(|(i, c)| (i, c.clone()))))
    }

    pub fn element(&self, coords: &SparseVec) -> Derivation {
        let mut t = self.space.zero(0);
        for (i, c) in coords.iter() {
            t = t.add(&self.reps[i].scale(c));
        }
        t
    }

    /// `[θ]·[η] = [log(e^θ ∘ e^η)]`
    pub fn product(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec> {
        let lie = self.space.target().lie();
        let ex = exp_derivation(lie, &self.element(x))?;
        let ey = exp_derivation(lie, &self.element(y))?;
        let composite: Vec<LieElement> = ey.iter().map(|v| v.substitute(&ex, lie)).collect();
        self.class_of(&log_automorphism(lie, &composite)?)
    }

    pub fn power(&self, lambda: &Rat, x: &SparseVec) -> SparseVec {
        x.scaled(lambda)
    }

    pub fn inverse(&self, x: &SparseVec) -> SparseVec {
        x.scaled(&Rat::from_int(-1))
    }

    /// Dimensions of the lower central series down to 0.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let n = self.dim();
        let bracket = |x: &SparseVec, y: &SparseVec| {
            let mut out = SparseVec::new();
            for (i, a) in x.iter() {
                for (j, b) in y.iter() {
                    out.add_scaled(&self.constants[i][j], &(a * b));
                }
            }
            out
        };
        let mut current: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
        let mut dims = vec![n];
        while !current.is_empty() {
            let mut e = Echelon::new();
            let next: Vec<SparseVec> =
                (0..n).flat_map(|i| current.iter().map(move |c| (i, c))).map(|(i, c)| bracket(&SparseVec::unit(i), c)).filter(|b| e.insert(b)).collect();
            if next.len() == current.len() {
                break;
            }
            dims.push(next.len());
            current = next;
        }
        dims
    }

    pub fn nilpotency_class(&self) -> usize {
        self.lower_central_series().iter().filter(|d| **d > 0).count()
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().flatten().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyingReport {
    pub spec: String,
    pub mode: Mode,
    pub cap: usize,
    /// FREE: `H_n(Der^𝒢 ×̃ sL)` for `n ≥ 1` (the cover); POINTED: `H_n(L ×̃ Der^Π)` for `n ≥ 0`.
    pub homology: Vec<(i64, usize)>,
    /// `dim H₀(Der^𝒢)` (resp. `Der^Π`).
    pub der_h0: usize,
    /// `dim Im H₀(ad)`; always 0 in pointed mode.
    pub ad_image: usize,
    pub group: AutGroup,
    /// Length of the lower central series of the positive-degree homology Lie algebra,
    /// counting only brackets that land inside the window.
    pub homology_nilpotency: usize,
    pub saturated: Option<bool>,
    /// `(n, dims)` of the Postnikov stage `M/(M_{>n} ⊕ Z_n)` when requested.
    pub postnikov: Option<(i64, Vec<(i64, usize)>)>,
    pub total: TwistedComplex,
}

/// Nilpotency index of the Lie algebra `H_{≥1}` of a complex whose bracket is given on coordinates.
fn homology_nilpotency(c: &GradedChainComplex, lo: i64, hi: i64, bracket: impl Fn(i64, &SparseVec, i64, &SparseVec) -> Result<SparseVec>) -> Result<usize> {
    let lo = lo.max(1);
    if lo > hi {
        return Ok(0);
    }
    let reports = (lo..=hi).map(|n| c.homology_at(n)).collect::<Result<Vec<_>>>()?;
    let report = |n: i64| &reports[(n - lo) as usize];
    let gens: Vec<(i64, SparseVec)> = reports.iter().flat_map(|r| r.cycle_reps.iter().map(move |z| (r.degree, z.clone()))).collect();
    let class = |n: i64, z: &SparseVec| -> Result<SparseVec> { report(n).class_coordinates(z, c.dim(n)) };
    let mut current: Vec<(i64, SparseVec)> = gens.clone();
    let mut length = 0;
    while !current.is_empty() {
        length += 1;
        let mut next = Vec::new();
        let mut per_degree: std::collections::BTreeMap<i64, Echelon> = Default::default();
        for (p, a) in &gens {
            for (q, b) in &current {
                let n = p + q;
                if n > hi {
                    continue;
                }
                let z = bracket(*p, a, *q, b)?;
                let cls = class(n, &z)?;
                if per_degree.entry(n).or_default().insert(&cls) {
                    next.push((n, z));
                }
            }
        }
        current = next;
    }
    Ok(length)
}

fn restricted(space: DerSpace, basis: Vec<SparseVec>, hi: i64) -> DerComplex {
    DerComplex::full(space, 0, hi).restrict(0, basis)
}

/// Invariants of `B aut_𝒢(X)` (free) or `B aut*_Π(X)` (pointed) on degrees `lo..=hi`.
pub fn classifying_invariants(l: &Dgl, spec: &GSpec, mode: Mode, lo: i64, hi: i64, postnikov: Option<i64>) -> Result<ClassifyingReport> {
    if lo > hi {
        return Err(Error::Usage(format!("empty degree window {lo}..{hi}")));
    }
    let g0 = der_g_zero(l, spec, mode)?;
    let space = DerSpace::of(l);
    let boundaries = r_zero(&space, Mode::Pointed)?;
    let der_h0 = g0.basis.len() - boundaries.len();
    let ad_image = g0.r0.len() - boundaries.len();
    let group = AutGroup::new(space.clone(), &g0.basis, &g0.r0)?;
    let top = hi + 2;
    let (total, homology, nil) = match mode {
        Mode::Free => {
            let ds = DerSl::new(restricted(space, g0.basis.clone(), top));
            let total = ds.complex()?;
            let cover = total.total.cover(1);
            let homology = cover.homology_dims(lo.max(1), hi)?;
            let nil = homology_nilpotency(&total.total, lo, hi, |p, a, q, b| ds.coordinates(&ds.bracket(&ds.element(p, a), &ds.element(q, b))?))?;
            (total, homology, nil)
        }
        Mode::Pointed => {
            let ld = LDer::new(restricted(space, g0.basis.clone(), top))?;
            let total = ld.complex()?;
            let homology = total.total.homology_dims(lo.max(0), hi)?;
            let nil = homology_nilpotency(&total.total, lo, hi, |p, a, q, b| ld.coordinates(&ld.bracket(&ld.element(p, a), &ld.element(q, b))?))?;
            (total, homology, nil)
        }
    };
    let postnikov = match postnikov {
        Some(n) => {
            let base = if mode == Mode::Free { total.total.cover(1) } else { total.total.clone() };
            let stage = postnikov_truncate(&base, n);
            let dims = if stage.total_dim() == 0 { (lo..=hi).map(|k| (k, 0)).collect() } else { stage.homology_dims(lo.max(stage.lo()), hi.min(stage.hi()))? };
            Some((n, dims))
        }
        None => None,
    };
    Ok(ClassifyingReport {
        spec: spec.to_string(),
        mode,
        cap: l.cap(),
        homology,
        der_h0,
        ad_image,
        group,
        homology_nilpotency: nil,
        saturated: g0.saturated,
        postnikov,
        total,
    })
}
