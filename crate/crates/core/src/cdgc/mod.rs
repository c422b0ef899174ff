// SPDX-License-Identifier: Apache-2.0
//! The chains/Lie functor pair at finite word cap, and convolution dgl's.

pub mod chains;
pub mod coalgebra;
pub mod convolution;
pub mod lie;

pub use chains::Chains;
pub use coalgebra::Cdgc;
pub use convolution::{mc_of_morphism, universal_mc, Convolution, HomElement, UNIVERSAL_MC_SIGN};
pub use lie::{alpha, beta, compare_homology, lie_functor, morphism_matrix, verify_beta, AlphaComparison, LieOfCoalgebra};
