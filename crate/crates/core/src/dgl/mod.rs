// SPDX-License-Identifier: Apache-2.0
//! Differential graded Lie algebras on free truncated presentations.

pub mod builtins;
pub mod group;
pub mod h0;
pub mod presentation;

pub use group::{act_on_morphism, bch, exp_ad, exp_derivation, gauge_act, gauge_equivalent, gauge_raw, log_automorphism, GaugeSearch};
pub use h0::H0Group;
pub use presentation::{is_nilpotent, Derivation, Dgl, DglMorphism};

use crate::exactlin::GradedChainComplex;

/// `M/(M_{>n} ⊕ Z_n)`: homology survives below n and vanishes from n on.
pub fn postnikov_truncate(m: &GradedChainComplex, n: i64) -> GradedChainComplex {
    m.postnikov_quotient(n)
}
