// SPDX-License-Identifier: Apache-2.0
//! Resource limits shared by every pipeline.

use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_BASIS_LIMIT: usize = 20_000;

static OVERRIDE: AtomicUsize = AtomicUsize::new(0);

thread_local! {
    static SCOPED: Cell<usize> = const { Cell::new(0) };
}

/// Maximum basis size allowed in a single degree: a scoped override on this thread,
/// else a process-wide override, else `CDGL_RESOURCE_LIMIT`, else the default.
pub fn basis_limit() -> usize {
    if let n @ 1.. = SCOPED.with(Cell::get) {
        return n;
    }
    match OVERRIDE.load(Ordering::Relaxed) {
        0 => std::env::var("CDGL_RESOURCE_LIMIT").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BASIS_LIMIT),
        n => n,
    }
}

/// Process-wide override; `0` restores the environment/default lookup.
pub fn set_basis_limit(n: usize) {
    OVERRIDE.store(n, Ordering::Relaxed);
}

/// Runs `f` on this thread with the given limit.
pub fn with_basis_limit<T>(n: usize, f: impl FnOnce() -> T) -> T {
    let old = SCOPED.with(|c| c.replace(n));
    let out = f();
    SCOPED.with(|c| c.set(old));
    out
}

pub fn check_basis_size(degree: i64, dim: usize) -> Result<()> {
    let limit = basis_limit();
    if dim > limit {
        return Err(Error::Resource(format!("basis in degree {degree} has {dim} elements, limit {limit}")));
    }
    Ok(())
}
