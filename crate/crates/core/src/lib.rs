// SPDX-License-Identifier: Apache-2.0
//! Exact computer algebra for complete differential graded Lie algebras.

pub mod cdgc;
pub mod derivations;
pub mod dgl;
pub mod error;
pub mod exactlin;
pub mod freelie;
pub mod homotopy;
pub mod workbench;
pub mod limits;
pub mod rat;

pub use error::{Error, Result};
pub use rat::Rat;
