// SPDX-License-Identifier: Apache-2.0
//! Exact sparse linear algebra over ℚ, chain complexes and their homology.

pub mod complex;
pub mod echelon;
pub mod les;
pub mod sparse;

pub use complex::{describe_combination, rank_nullity_holds, GradedChainComplex, HomologyReport};
pub use echelon::Echelon;
pub use les::{les_of_ses, ChainMap, LesDegree, LongExactSequence};
pub use sparse::{solve_linear, SparseMat, SparseVec};
