// SPDX-License-Identifier: Apache-2.0
//! Free graded Lie algebras over ℚ, truncated by bracket length.

pub mod algebra;
pub mod expr;
pub mod tensor;

pub use algebra::{coordinates, lie_basis, witt_number, BracketTree, FreeLie, Generator, GradedBasis, LieBlock, LieElement};
pub use expr::{parse_expr, Expr, Span};
pub use tensor::{Letter, Tensor, Word};
