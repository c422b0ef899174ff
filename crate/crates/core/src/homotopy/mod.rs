// SPDX-License-Identifier: Apache-2.0
//! Cylinder objects `L ⊗̂ Λ(t, dt)` and verification of homotopies between dgl morphisms.

pub mod cylinder;
pub mod witness;

pub use cylinder::{tensor_interval, Cylinder, PolyForm};
pub use witness::{check_homotopy, check_homotopy_stable, HomotopyFailure, HomotopyVerdict, Witness};
