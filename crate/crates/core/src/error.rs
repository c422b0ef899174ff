// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ill-formed complex: boundary squared is nonzero at degree {degree}")]
    IllFormedComplex { degree: i64 },
    #[error("not a short exact sequence at degree {degree}: {reason}")]
    ExactnessViolation { degree: i64, reason: String },
    #[error("element is not in the span of the given basis")]
    NotInSpan,
    #[error("ill-formed differential: d^2({generator}) has a nonzero term of length {length}: {witness}")]
    IllFormedDifferential { generator: String, length: usize, witness: String },
    #[error("ill-formed coalgebra: {0}")]
    IllFormedCoalgebra(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("not a Maurer-Cartan element, residue {residue}")]
    NotMaurerCartan { residue: String },
    #[error("series does not terminate: {0}")]
    Divergence(String),
    #[error("invalid subgroup specification: {0}")]
    InvalidSubgroup(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("sign convention check failed: {0}")]
    SignConvention(String),
    #[error("{0}")]
    Usage(String),
    #[error("not a morphism: {0}")]
    NotMorphism(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
