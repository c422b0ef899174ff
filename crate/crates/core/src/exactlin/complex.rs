// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::echelon::Echelon;
use super::sparse::{solve_linear, SparseMat, SparseVec};
use crate::error::{Error, Result};

/// Bounded chain complex over ℚ with labelled bases.
///
/// `boundary(n)` is ∂_n: C_n → C_{n−1}; outside the stored range the spaces are zero.
#[derive(Clone, Debug)]
pub struct GradedChainComplex {
    lo: i64,
    bases: Vec<Vec<String>>,
    boundaries: Vec<SparseMat>,
    meta: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub degree: i64,
    pub dimension: usize,
    pub cycle_reps: Vec<SparseVec>,
    /// A basis of the boundaries in this degree.
    pub boundary_basis: Vec<SparseVec>,
    pub truncation_meta: Vec<(String, String)>,
}

impl HomologyReport {
    /// Coordinates of the class of the cycle `z` in terms of `cycle_reps`.
    pub fn class_coordinates(&self, z: &SparseVec, ambient_dim: usize) -> Result<SparseVec> {
        if self.dimension == 0 && self.boundary_basis.is_empty() {
            return if z.is_zero() { Ok(SparseVec::new()) } else { Err(Error::NotInSpan) };
        }
        let nb = self.boundary_basis.len();
        let mut cols = self.boundary_basis.clone();
        cols.extend(self.cycle_reps.iter().cloned());
        let m = SparseMat::from_columns(ambient_dim, cols)?;
        let y = solve_linear(&m, z)?.ok_or(Error::NotInSpan)?;
        Ok(y.remap(|i| i.checked_sub(nb)))
    }
}

impl GradedChainComplex {
    /// `bases[k]` and `boundaries[k]` belong to degree `lo + k`.
    pub fn new(lo: i64, bases: Vec<Vec<String>>, boundaries: Vec<SparseMat>) -> Result<GradedChainComplex> {
        if bases.len() != boundaries.len() {
            return Err(Error::Shape("one boundary matrix per degree is required".into()));
        }
        for (k, d) in boundaries.iter().enumerate() {
            let rows = if k == 0 { d.n_rows() } else { bases[k - 1].len() };
            if d.n_cols() != bases[k].len() || d.n_rows() != rows || (k == 0 && !d.is_zero()) {
                return Err(Error::Shape(format!(
                    "boundary at degree {} is {}x{}, expected {}x{}",
                    lo + k as i64,
                    d.n_rows(),
                    d.n_cols(),
                    rows,
                    bases[k].len()
                )));
            }
        }
        let c = GradedChainComplex { lo, bases, boundaries, meta: Vec::new() };
        for n in c.lo..=c.hi() {
            c.check_square_zero(n)?;
        }
        Ok(c)
    }

    pub fn zero() -> GradedChainComplex {
        GradedChainComplex { lo: 0, bases: Vec::new(), boundaries: Vec::new(), meta: Vec::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> GradedChainComplex {
        self.meta.retain(|(k, _)| k != key);
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self) -> &[(String, String)] {
        &self.meta
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top stored degree (`lo − 1` when empty).
    pub fn hi(&self) -> i64 {
        self.lo + self.bases.len() as i64 - 1
    }

    fn idx(&self, n: i64) -> Option<usize> {
        if n < self.lo || n > self.hi() {
            None
        } else {
            Some((n - self.lo) as usize)
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.idx(n).map_or(0, |k| self.bases[k].len())
    }

    pub fn basis(&self, n: i64) -> &[String] {
        match self.idx(n) {
            Some(k) => &self.bases[k],
            None => &[],
        }
    }

    pub fn boundary(&self, n: i64) -> SparseMat {
        match self.idx(n) {
            Some(0) => SparseMat::zeros(self.dim(n - 1), self.dim(n)),
            Some(k) => self.boundaries[k].clone(),
            None => SparseMat::zeros(self.dim(n - 1), self.dim(n)),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    fn check_square_zero(&self, n: i64) -> Result<()> {
        let a = self.boundary(n - 1);
        let b = self.boundary(n);
        if a.n_cols() == 0 || b.n_cols() == 0 {
            return Ok(());
        }
        if !a.mul(&b)?.is_zero() {
            return Err(Error::IllFormedComplex { degree: n });
        }
        Ok(())
    }

    pub fn homology_at(&self, n: i64) -> Result<HomologyReport> {
        self.check_square_zero(n)?;
        self.check_square_zero(n + 1)?;
        let cycles = self.boundary(n).kernel();
        let mut e = Echelon::new();
        let boundary_basis: Vec<SparseVec> =
            self.boundary(n + 1).columns().iter().filter(|c| e.insert(c)).cloned().collect();
        let cycle_reps: Vec<SparseVec> = cycles.into_iter().filter(|z| e.insert(z)).collect();
        Ok(HomologyReport {
            degree: n,
            dimension: cycle_reps.len(),
            cycle_reps,
            boundary_basis,
            truncation_meta: self.meta.clone(),
        })
    }

    pub fn homology_dims(&self, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>> {
        (lo..=hi).map(|n| Ok((n, self.homology_at(n)?.dimension))).collect()
    }

    /// Human-readable linear combination of basis labels.
    pub fn describe(&self, n: i64, v: &SparseVec) -> String {
        describe_combination(self.basis(n), v)
    }

    /// The n-connected cover: degrees below n dropped, degree n replaced by its cycles.
    pub fn cover(&self, n: i64) -> GradedChainComplex {
        let cycles = self.boundary(n).kernel();
        let free: Vec<usize> = cycles.iter().map(free_column).collect();
        let mut bases = vec![cycles.iter().map(|z| self.describe(n, z)).collect::<Vec<_>>()];
        let mut boundaries = vec![SparseMat::zeros(0, cycles.len())];
        for m in (n + 1)..=self.hi() {
            bases.push(self.basis(m).to_vec());
            let d = self.boundary(m);
            if m == n + 1 {
                // Columns of ∂_{n+1} are cycles; their kernel coordinates are the free-column values.
                let cols = d.columns().iter().map(|c| SparseVec::from_pairs(free.iter().enumerate().map(|(k, f)| (k, c.get(*f))))).collect();
                boundaries.push(SparseMat::from_columns(cycles.len(), cols).expect("cover shape"));
            } else {
                boundaries.push(d);
            }
        }
        GradedChainComplex { lo: n, bases, boundaries, meta: self.meta.clone() }
    }

    /// Quotient by degrees above n and by the n-cycles: degree n becomes C_n / Z_n.
    pub fn postnikov_quotient(&self, n: i64) -> GradedChainComplex {
        if n > self.hi() {
            return self.clone();
        }
        if n < self.lo {
            return GradedChainComplex { lo: self.lo, bases: Vec::new(), boundaries: Vec::new(), meta: self.meta.clone() };
        }
        let mut e = Echelon::new();
        for z in self.boundary(n).kernel() {
            e.insert(&z);
        }
        let keep: Vec<usize> = (0..self.dim(n)).filter(|j| e.insert(&SparseVec::unit(*j))).collect();
        let top = (n - self.lo) as usize;
        let mut bases: Vec<Vec<String>> = self.bases[..top].to_vec();
        let mut boundaries: Vec<SparseMat> = self.boundaries[..top].to_vec();
        bases.push(keep.iter().map(|j| format!("[{}]", self.basis(n)[*j])).collect());
        let d = self.boundary(n);
        let rows = if top == 0 { 0 } else { self.dim(n - 1) };
        let cols = keep.iter().map(|j| if top == 0 { SparseVec::new() } else { d.column(*j).clone() }).collect();
        boundaries.push(SparseMat::from_columns(rows, cols).expect("quotient shape"));
        GradedChainComplex { lo: self.lo, bases, boundaries, meta: self.meta.clone() }
    }

    /// Direct sum with another complex, sharing no basis elements.
    pub fn direct_sum(&self, other: &GradedChainComplex) -> GradedChainComplex {
        if self.bases.is_empty() {
            return other.clone();
        }
        if other.bases.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut bases = Vec::new();
        let mut boundaries = Vec::new();
        for n in lo..=hi {
            let mut b = self.basis(n).to_vec();
            b.extend(other.basis(n).iter().cloned());
            bases.push(b);
            let (a1, a0) = (self.dim(n), self.dim(n - 1));
            let rows = if n == lo { 0 } else { a0 + other.dim(n - 1) };
            let mut cols: Vec<SparseVec> = Vec::new();
            if n > lo {
                cols.extend(self.boundary(n).columns().iter().cloned());
                cols.extend(other.boundary(n).columns().iter().map(|c| c.remap(|i| Some(i + a0))));
            } else {
                cols.extend((0..a1 + other.dim(n)).map(|_| SparseVec::new()));
            }
            boundaries.push(SparseMat::from_columns(rows, cols).expect("sum shape"));
        }
        GradedChainComplex { lo, bases, boundaries, meta: self.meta.clone() }
    }
}

/// Index of the leading unit entry of a null-space vector built from a free column.
fn free_column(z: &SparseVec) -> usize {
    // null_space places 1 at the free column and entries only at pivot columns,
    // and every pivot column of such a vector is smaller than the free column.
    z.max_index().expect("nonzero cycle")
}

pub fn describe_combination(labels: &[String], v: &SparseVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let label = labels.get(i).cloned().unwrap_or_else(|| format!("e{i}"));
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if a.is_one() {
            s.push_str(&label);
        } else {
            let _ = write!(s, "{a}*{label}");
        }
    }
    s
}

/// Dimension formula consistency: dim H_n = dim C_n − rank ∂_n − rank ∂_{n+1}.
pub fn rank_nullity_holds(c: &GradedChainComplex, n: i64) -> Result<bool> {
    let h = c.homology_at(n)?.dimension;
    Ok(h + c.boundary(n).rank() + c.boundary(n + 1).rank() == c.dim(n))
}
