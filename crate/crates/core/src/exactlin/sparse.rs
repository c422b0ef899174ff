// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Sparse vector keyed by basis index. Zero entries are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: BTreeMap<usize, Rat>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec::default()
    }

    pub fn unit(i: usize) -> SparseVec {
        let mut v = SparseVec::new();
        v.set(i, Rat::one());
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Rat)>>(pairs: I) -> SparseVec {
        let mut v = SparseVec::new();
        for (i, c) in pairs {
            v.add_at(i, &c);
        }
        v
    }

    pub fn from_dense(xs: &[Rat]) -> SparseVec {
        SparseVec::from_pairs(xs.iter().cloned().enumerate())
    }

    pub fn get(&self, i: usize) -> Rat {
        self.entries.get(&i).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, c: Rat) {
        if c.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    pub fn add_at(&mut self, i: usize, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let cur = self.entries.remove(&i).unwrap_or_default();
        let s = &cur + c;
        if !s.is_zero() {
            self.entries.insert(i, s);
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (i, x) in &other.entries {
            self.add_at(*i, &(x * c));
        }
    }

    pub fn scaled(&self, c: &Rat) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn leading(&self) -> Option<(usize, &Rat)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn dot(&self, other: &SparseVec) -> Rat {
        let mut acc = Rat::zero();
        for (i, x) in &self.entries {
            if let Some(y) = other.entries.get(i) {
                acc += &(x * y);
            }
        }
        acc
    }

    pub fn to_dense(&self, n: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); n];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    /// Re-index through `f`, dropping entries mapped to `None`.
    pub fn remap(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().filter_map(|(i, c)| f(*i).map(|j| (j, c.clone()))))
    }
}

impl std::ops::Add<&SparseVec> for &SparseVec {
    type Output = SparseVec;
    fn add(self, o: &SparseVec) -> SparseVec {
        let mut v = self.clone();
        v.add_scaled(o, &Rat::one());
        v
    }
}

impl std::ops::Sub<&SparseVec> for &SparseVec {
    type Output = SparseVec;
    fn sub(self, o: &SparseVec) -> SparseVec {
        let mut v = self.clone();
        v.add_scaled(o, &Rat::from_int(-1));
        v
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// Column-major sparse matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    n_rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> SparseMat {
        SparseMat { n_rows, cols: vec![SparseVec::new(); n_cols] }
    }

    pub fn identity(n: usize) -> SparseMat {
        SparseMat { n_rows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(n_rows: usize, cols: Vec<SparseVec>) -> Result<SparseMat> {
        for (j, c) in cols.iter().enumerate() {
            if let Some(m) = c.max_index() {
                if m >= n_rows {
                    return Err(Error::Shape(format!("column {j} has row index {m} >= {n_rows}")));
                }
            }
        }
        Ok(SparseMat { n_rows, cols })
    }

    pub fn from_dense(rows: &[Vec<Rat>]) -> SparseMat {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMat::zeros(n_rows, n_cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> SparseMat {
        let dense: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|x| Rat::from_int(*x)).collect()).collect();
        SparseMat::from_dense(&dense)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.cols[j].get(i)
    }

    pub fn set(&mut self, i: usize, j: usize, c: Rat) {
        assert!(i < self.n_rows && j < self.cols.len(), "index out of bounds");
        self.cols[j].set(i, c);
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn rows(&self) -> Vec<SparseVec> {
        let mut rows = vec![SparseVec::new(); self.n_rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.iter() {
                rows[i].set(j, x.clone());
            }
        }
        rows
    }

    pub fn transpose(&self) -> SparseMat {
        SparseMat { n_rows: self.cols.len(), cols: self.rows() }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> Result<SparseVec> {
        if let Some(m) = v.max_index() {
            if m >= self.n_cols() {
                return Err(Error::Shape(format!("vector index {m} >= {} columns", self.n_cols())));
            }
        }
        let mut out = SparseVec::new();
        for (j, c) in v.iter() {
            out.add_scaled(&self.cols[j], c);
        }
        Ok(out)
    }

    /// `self * other`
    pub fn mul(&self, other: &SparseMat) -> Result<SparseMat> {
        if self.n_cols() != other.n_rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows,
                self.n_cols(),
                other.n_rows,
                other.n_cols()
            )));
        }
        let cols = other.cols.iter().map(|c| self.mul_vec(c)).collect::<Result<Vec<_>>>()?;
        Ok(SparseMat { n_rows: self.n_rows, cols })
    }

    pub fn rank(&self) -> usize {
        super::echelon::rank(&self.rows())
    }

    /// Basis of the null space, one vector per free column of the reduced row echelon form.
    pub fn kernel(&self) -> Vec<SparseVec> {
        super::echelon::null_space(&self.rows(), self.n_cols())
    }

    /// A maximal linearly independent subset of the columns, in column order.
    pub fn image_basis(&self) -> Vec<SparseVec> {
        let mut e = super::echelon::Echelon::new();
        self.cols.iter().filter(|c| e.insert(c)).cloned().collect()
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &SparseMat) -> Result<SparseMat> {
        if self.n_rows != other.n_rows {
            return Err(Error::Shape("row counts differ in hcat".into()));
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(SparseMat { n_rows: self.n_rows, cols })
    }
}

impl fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMat {}x{}", self.n_rows, self.n_cols())?;
        for i in 0..self.n_rows {
            let row: Vec<String> = (0..self.n_cols()).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Solve `A x = b`; `None` when `b` is not in the column space.
pub fn solve_linear(a: &SparseMat, b: &SparseVec) -> Result<Option<SparseVec>> {
    if let Some(m) = b.max_index() {
        if m >= a.n_rows() {
            return Err(Error::Shape(format!("right-hand side index {m} >= {} rows", a.n_rows())));
        }
    }
    let n = a.n_cols();
    let mut rows = a.rows();
    for (i, c) in b.iter() {
        rows[i].set(n, c.clone());
    }
    let rref = super::echelon::rref(&rows);
    let mut x = SparseVec::new();
    for (p, row) in &rref {
        if *p == n {
            return Ok(None);
        }
        x.set(*p, row.get(n));
    }
    Ok(Some(x))
}
