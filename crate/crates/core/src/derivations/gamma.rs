// SPDX-License-Identifier: Apache-2.0
//! `Γ: s⁻¹Der_φ̃(ℒ𝒞(L′), L) → (Hom(𝒞̄(L′), L), D_φ̄)`, `Γ(s⁻¹θ)(c) = (−1)^{|θ|} θ(s⁻¹c)`.

use super::space::DerSpace;
use crate::cdgc::{alpha, lie_functor, mc_of_morphism, Chains, Convolution, HomElement, LieOfCoalgebra};
use crate::dgl::{Derivation, DglMorphism};
use crate::error::{Error, Result};
use crate::exactlin::SparseMat;
use crate::freelie::LieElement;
use crate::rat::Rat;

/// What was verified, basis element by basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport {
    pub word_cap: usize,
    pub cap: usize,
    /// `(degree of θ, dimension)` for every nonzero `Der_n`.
    pub dims: Vec<(i64, usize)>,
    pub chain_checks: usize,
    pub bracket_checks: usize,
}

struct Setup {
    chains: Chains,
    lc: LieOfCoalgebra,
    space: DerSpace,
    conv: Convolution,
    mc: HomElement,
}

impl Setup {
    fn gamma(&self, theta: &Derivation) -> HomElement {
        let mut f = self.conv.zero(theta.degree - 1);
        let s = Rat::sign(theta.degree);
        for (k, c) in self.lc.source_index.iter().enumerate() {
            f.values[*c] = theta.values[k].scale(&s);
        }
        f
    }

    /// `[s⁻¹γ, s⁻¹η] = s⁻¹θ` with `θ(s⁻¹c) = −Σ (−1)^{(|η|−1)|cᵢ|} [γ(s⁻¹cᵢ), η(s⁻¹c′ᵢ)]` over `Δ̄c`.
    fn bracket(&self, gamma: &Derivation, eta: &Derivation) -> Derivation {
        let cdgc = &self.chains.cdgc;
        let mut gen_of = vec![usize::MAX; cdgc.dim()];
        for (k, c) in self.lc.source_index.iter().enumerate() {
            gen_of[*c] = k;
        }
        let values = self
            .lc
            .source_index
            .iter()
            .map(|c| {
                let mut acc = LieElement::zero(self.space.target().lie());
                for (a, b, x) in cdgc.reduced_coproduct(*c) {
                    let s = Rat::sign((eta.degree - 1) * cdgc.degrees[a]);
                    let br = gamma.values[gen_of[a]].bracket(&eta.values[gen_of[b]]);
                    acc.add_scaled(&br, &-&(&x * &s));
                }
                acc
            })
            .collect();
        Derivation { degree: gamma.degree + eta.degree - 1, values }
    }
}

/// Verifies that `Γ` is a bijective chain map commuting with brackets, at caps `(word_cap, cap)`.
pub fn gamma_check(phi: &DglMorphism, word_cap: usize, cap: usize) -> Result<GammaReport> {
    let source = phi.source.with_cap(cap);
    let target = phi.target.with_cap(cap);
    let phi = DglMorphism::new(source.clone(), target.clone(), phi.images.iter().map(|v| v.recap(target.lie())).collect())?;
    let chains = Chains::build(&source, word_cap)?;
    let lc = lie_functor(&chains.cdgc, cap)?;
    let a = alpha(&chains, &lc, &source)?;
    let phi_tilde = phi.compose(&a)?;
    let space = DerSpace::along(&phi_tilde);
    let conv = Convolution::new(chains.cdgc.clone(), target.clone(), true);
    let mc = mc_of_morphism(&chains, &phi, &conv);
    let setup = Setup { chains, lc, space, conv, mc };

    let mut report = GammaReport { word_cap, cap, dims: Vec::new(), chain_checks: 0, bracket_checks: 0 };
    let Some((lo, hi)) = setup.space.degree_span() else { return Ok(report) };
    let mut all: Vec<(String, Derivation)> = Vec::new();
    for n in lo..=hi {
        let basis = setup.space.basis_elements(n);
        if basis.is_empty() {
            continue;
        }
        let labels = setup.space.labels(n);
        report.dims.push((n, basis.len()));
        // Bijectivity: Γ maps Der_n onto Hom_{n−1} isomorphically.
        let target_dim = setup.conv.basis(n - 1).len();
        let cols = basis.iter().map(|t| setup.conv.coordinates(&setup.gamma(t))).collect::<Result<Vec<_>>>()?;
        let m = SparseMat::from_columns(target_dim, cols)?;
        if target_dim != basis.len() || m.rank() != basis.len() {
            return Err(Error::SignConvention(format!("Γ is not bijective in degree {n}: {} → {target_dim}, rank {}", basis.len(), m.rank())));
        }
        for (t, label) in basis.iter().zip(&labels) {
            // d(s⁻¹θ) = −s⁻¹Dθ
            let lhs = setup.gamma(&setup.space.boundary(t)).scale(&Rat::from_int(-1));
            let rhs = setup.conv.twisted_differential(&setup.mc, &setup.gamma(t));
            if lhs != rhs {
                return Err(Error::SignConvention(format!("Γ does not commute with differentials on s⁻¹{label}")));
            }
            report.chain_checks += 1;
            all.push((label.clone(), t.clone()));
        }
    }
    for (la, a) in &all {
        for (lb, b) in &all {
            let lhs = setup.gamma(&setup.bracket(a, b));
            let rhs = setup.conv.bracket(&setup.gamma(a), &setup.gamma(b));
            if lhs != rhs {
                return Err(Error::SignConvention(format!("Γ does not commute with the bracket on (s⁻¹{la}, s⁻¹{lb})")));
            }
            report.bracket_checks += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgl::{builtins, Dgl};
    use crate::freelie::FreeLie;

    #[test]
    fn gamma_on_odd_sphere() {
        let l = builtins::sphere(3, 4).unwrap();
        let r = gamma_check(&DglMorphism::identity(&l), 3, 4).unwrap();
        assert_eq!(r.dims, vec![(0, 1)]);
        assert_eq!(r.bracket_checks, 1);
    }

    #[test]
    fn gamma_on_even_sphere() {
        let l = builtins::sphere(2, 4).unwrap();
        let r = gamma_check(&DglMorphism::identity(&l), 3, 4).unwrap();
        assert!(r.chain_checks > 0 && r.bracket_checks > 0);
    }

    #[test]
    fn gamma_on_the_zero_algebra() {
        let l = Dgl::free(FreeLie::new(Vec::new(), 3).unwrap());
        let r = gamma_check(&DglMorphism::identity(&l), 3, 3).unwrap();
        assert_eq!(r.chain_checks, 0);
    }
}
