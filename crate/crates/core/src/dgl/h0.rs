// SPDX-License-Identifier: Apache-2.0
//! H₀ of a truncated dgl as a nilpotent group under BCH.

use super::group::bch;
use super::presentation::Dgl;
use crate::error::{Error, Result};
use crate::exactlin::{Echelon, GradedChainComplex, HomologyReport, SparseVec};
use crate::freelie::{GradedBasis, LieElement};
use crate::rat::Rat;
use std::sync::Arc;

/// Degree-0 homology with its BCH group law, at the dgl's cap.
pub struct H0Group {
    dgl: Dgl,
    basis0: Arc<GradedBasis>,
    report: HomologyReport,
    reps: Vec<LieElement>,
    /// `constants[i][j]` = class of `[zᵢ, zⱼ]`.
    constants: Vec<Vec<SparseVec>>,
}

impl H0Group {
    pub fn new(l: &Dgl) -> Result<H0Group> {
        let complex: GradedChainComplex = l.chain_complex(0, 0)?;
        let report = complex.homology_at(0)?;
        let basis0 = l.lie().graded_basis(0);
        let reps: Vec<LieElement> = report.cycle_reps.iter().map(|z| basis0.combine(z)).collect();
        H0Group::assemble(l.clone(), basis0, report, reps)
    }

    fn assemble(dgl: Dgl, basis0: Arc<GradedBasis>, report: HomologyReport, reps: Vec<LieElement>) -> Result<H0Group> {
        let mut g = H0Group { dgl, basis0, report, reps, constants: Vec::new() };
        let mut constants = Vec::new();
        for a in &g.reps {
            let row = g.reps.iter().map(|b| g.class_of(&a.bracket(b))).collect::<Result<Vec<_>>>()?;
            constants.push(row);
        }
        g.constants = constants;
        Ok(g)
    }

    /// Same group with representatives shifted by the given boundaries.
    pub fn with_representatives(&self, reps: Vec<LieElement>) -> Result<H0Group> {
        if reps.len() != self.reps.len() {
            return Err(Error::Shape("one representative per class is required".into()));
        }
        for (old, new) in self.reps.iter().zip(&reps) {
            let c = self.class_of(new)?;
            if c != self.class_of(old)? {
                return Err(Error::Usage("replacement representative is in another class".into()));
            }
        }
        let mut report = self.report.clone();
        report.cycle_reps = reps.iter().map(|r| self.basis0.coordinates(r)).collect::<Result<_>>()?;
        H0Group::assemble(self.dgl.clone(), self.basis0.clone(), report, reps)
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[LieElement] {
        &self.reps
    }

    pub fn boundaries(&self) -> Vec<LieElement> {
        self.report.boundary_basis.iter().map(|v| self.basis0.combine(v)).collect()
    }

    pub fn structure_constants(&self) -> &[Vec<SparseVec>] {
        &self.constants
    }

    /// Class coordinates of a degree-0 cycle.
    pub fn class_of(&self, z: &LieElement) -> Result<SparseVec> {
        if !self.dgl.differential(z).is_zero() {
            return Err(Error::Usage("element is not a cycle".into()));
        }
        let v = self.basis0.coordinates(z)?;
        self.report.class_coordinates(&v, self.basis0.dim())
    }

    pub fn element(&self, coords: &SparseVec) -> LieElement {
        let mut e = LieElement::zero(self.dgl.lie());
        for (i, c) in coords.iter() {
            e.add_scaled(&self.reps[i], c);
        }
        e
    }

    /// `[x]·[y] = [x * y]`
    pub fn product(&self, x: &SparseVec, y: &SparseVec) -> Result<SparseVec> {
        self.class_of(&bch(&self.element(x), &self.element(y))?)
    }

    /// `[x]^λ = [λx]`
    pub fn power(&self, lambda: &Rat, x: &SparseVec) -> SparseVec {
        x.scaled(lambda)
    }

    pub fn inverse(&self, x: &SparseVec) -> SparseVec {
        x.scaled(&Rat::from_int(-1))
    }

    fn bracket_coords(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out.add_scaled(&self.constants[i][j], &(a * b));
            }
        }
        out
    }

    /// Dimensions of the lower central series γ₁ ⊇ γ₂ ⊇ … down to 0.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let n = self.dim();
        let mut current: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
        let mut dims = vec![n];
        while !current.is_empty() {
            let mut e = Echelon::new();
            let mut next = Vec::new();
            for i in 0..n {
                for c in &current {
                    let b = self.bracket_coords(&SparseVec::unit(i), c);
                    if e.insert(&b) {
                        next.push(b);
                    }
                }
            }
            if next.len() == current.len() {
                // γ_{k+1} = γ_k ≠ 0 cannot happen in a nilpotent quotient.
                break;
            }
            dims.push(next.len());
            current = next;
        }
        dims
    }

    /// Length of the lower central series; 0 for the trivial group, 1 when abelian.
    pub fn nilpotency_class(&self) -> usize {
        self.lower_central_series().iter().filter(|d| **d > 0).count()
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().flatten().all(|c| c.is_zero())
    }

    pub fn labels(&self) -> Vec<String> {
        self.reps.iter().map(|r| r.to_expr_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgl::builtins;

    #[test]
    fn circle_wedge_at_cap_two() {
        let l = builtins::wedge(&[1, 1], 2).unwrap();
        let g = H0Group::new(&l).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.nilpotency_class(), 2);
        assert!(!g.is_abelian());
        let u = SparseVec::unit(0);
        let prod = g.product(&g.power(&Rat::new(2, 3), &u), &g.power(&Rat::new(1, 3), &u)).unwrap();
        assert_eq!(prod, u);
    }

    #[test]
    fn single_circle_is_abelian() {
        let l = builtins::wedge(&[1], 4).unwrap();
        let g = H0Group::new(&l).unwrap();
        assert_eq!(g.dim(), 1);
        assert!(g.is_abelian());
        assert_eq!(g.nilpotency_class(), 1);
    }
}
