// SPDX-License-Identifier: Apache-2.0
//! Derivation complexes, twisted products and the mapping-space and classifying-space pipelines.

pub mod gamma;
pub mod gspec;
pub mod pipelines;
pub mod space;
pub mod twisted;

pub use gamma::{gamma_check, GammaReport};
pub use gspec::{der_g_zero, r_zero, DerGZero, GSpec, GeneratorFiltration, Mode};
pub use pipelines::{classifying_invariants, convolution_route, is_minimal, mapping_space_pi, AutGroup, ClassifyingReport, MappingSpaceReport};
pub use space::{der_complex, DerComplex, DerSpace};
pub use twisted::{DerSl, DerSlElement, HomDer, LDer, LDerElement, TwistedComplex, Variant};
