use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TensorError;
use crate::scalar::RatFunc;

/// Sparse column vector; entries sorted by index, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVec {
    dim: usize,
    entries: Vec<(usize, RatFunc)>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        SparseVec { dim, entries: Vec::new() }
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        SparseVec { dim, entries: vec![(i, RatFunc::one())] }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (usize, RatFunc)>) -> Self {
        SparseVec { dim, entries: accumulate(terms) }
    }

    pub(crate) fn from_sorted(dim: usize, entries: Vec<(usize, RatFunc)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(i, v)| *i < dim && !v.is_zero()));
        SparseVec { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, RatFunc)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, RatFunc)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> RatFunc {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(p) => self.entries[p].1.clone(),
            Err(_) => RatFunc::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(usize, RatFunc)> {
        self.entries.first()
    }

    pub fn scale(&self, c: &RatFunc) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero(self.dim);
        }
        SparseVec { dim: self.dim, entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &RatFunc, other: &SparseVec) -> SparseVec {
        assert_eq!(self.dim, other.dim, "vector dimension mismatch");
        if c.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, z))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, c * z));
                        b.next();
                    } else {
                        let s = x + &(c * z);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, z))) => {
                    out.push((*j, c * z));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { dim: self.dim, entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&RatFunc::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&RatFunc::from_int(-1), other)
    }

    /// Kronecker product: `(self ⊗ other)[i * dim(other) + j] = self[i] * other[j]`.
    pub fn tensor(&self, other: &SparseVec) -> SparseVec {
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for (i, x) in &self.entries {
            for (j, z) in &other.entries {
                entries.push((i * other.dim + j, x * z));
            }
        }
        SparseVec { dim: self.dim * other.dim, entries }
    }

    /// Bilinear pairing `Σ self[i] * other[i]`.
    pub fn dot(&self, other: &SparseVec) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (i, x) in &self.entries {
            if let Ok(p) = other.entries.binary_search_by_key(i, |e| e.0) {
                acc = &acc + &(x * &other.entries[p].1);
            }
        }
        acc
    }
}

pub(crate) fn accumulate(terms: impl IntoIterator<Item = (usize, RatFunc)>) -> Vec<(usize, RatFunc)> {
    let mut acc: BTreeMap<usize, RatFunc> = BTreeMap::new();
    for (i, v) in terms {
        if v.is_zero() {
            continue;
        }
        match acc.get_mut(&i) {
            Some(slot) => *slot = &*slot + &v,
            None => {
                acc.insert(i, v);
            }
        }
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Sparse matrix over `Q(y)`, stored by columns (coordinate order `(col, row)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinMap {
    rows: usize,
    cols: Vec<Vec<(usize, RatFunc)>>,
}

const PAR_THRESHOLD: usize = 64;

impl LinMap {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LinMap { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        LinMap { rows: n, cols: (0..n).map(|i| vec![(i, RatFunc::one())]).collect() }
    }

    pub fn scalar(n: usize, c: &RatFunc) -> Self {
        if c.is_zero() {
            return Self::zero(n, n);
        }
        LinMap { rows: n, cols: (0..n).map(|i| vec![(i, c.clone())]).collect() }
    }

    /// Entries `(row, col, value)`; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, RatFunc)>,
    ) -> Result<Self, TensorError> {
        let mut buckets: Vec<Vec<(usize, RatFunc)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(TensorError::IndexOutOfRange { row: r, col: c, rows, cols });
            }
            buckets[c].push((r, v));
        }
        Ok(LinMap { rows, cols: buckets.into_iter().map(accumulate).collect() })
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Result<Self, TensorError> {
        if let Some(v) = columns.iter().find(|v| v.dim() != rows) {
            return Err(TensorError::DimensionMismatch { expected: rows, found: v.dim() });
        }
        Ok(LinMap { rows, cols: columns.into_iter().map(SparseVec::into_entries).collect() })
    }

    /// Dense construction from row-major data; used for small literal matrices.
    pub fn from_dense(data: &[Vec<RatFunc>]) -> Result<Self, TensorError> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if let Some(r) = data.iter().find(|r| r.len() != cols) {
            return Err(TensorError::DimensionMismatch { expected: cols, found: r.len() });
        }
        Self::from_triplets(
            rows,
            cols,
            data.iter()
                .enumerate()
                .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> SparseVec {
        SparseVec::from_sorted(self.rows, self.cols[c].clone())
    }

    pub fn get(&self, r: usize, c: usize) -> RatFunc {
        match self.cols[c].binary_search_by_key(&r, |e| e.0) {
            Ok(p) => self.cols[c][p].1.clone(),
            Err(_) => RatFunc::zero(),
        }
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &RatFunc)> + '_ {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// Row-major sparse rows.
    pub fn to_rows(&self) -> Vec<Vec<(usize, RatFunc)>> {
        let mut out = vec![Vec::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out[*r].push((c, v.clone()));
            }
        }
        out
    }

    pub fn transpose(&self) -> LinMap {
        let rows = self.to_rows();
        LinMap { rows: self.cols.len(), cols: rows }
    }

    pub fn apply(&self, v: &SparseVec) -> Result<SparseVec, TensorError> {
        if v.dim() != self.cols() {
            return Err(TensorError::DimensionMismatch { expected: self.cols(), found: v.dim() });
        }
        let terms = v
            .entries()
            .iter()
            .flat_map(|(k, x)| self.cols[*k].iter().map(move |(r, a)| (*r, a * x)));
        Ok(SparseVec::from_sorted(self.rows, accumulate(terms)))
    }

    /// `self ∘ g`
    pub fn compose(&self, g: &LinMap) -> Result<LinMap, TensorError> {
        if self.cols() != g.rows {
            return Err(TensorError::DimensionMismatch { expected: self.cols(), found: g.rows });
        }
        let column = |gc: &Vec<(usize, RatFunc)>| {
            accumulate(gc.iter().flat_map(|(k, x)| self.cols[*k].iter().map(move |(r, a)| (*r, a * x))))
        };
        let cols = if g.cols() >= PAR_THRESHOLD {
            g.cols.par_iter().map(column).collect()
        } else {
            g.cols.iter().map(column).collect()
        };
        Ok(LinMap { rows: self.rows, cols })
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &RatFunc, other: &LinMap) -> Result<LinMap, TensorError> {
        if self.rows != other.rows || self.cols() != other.cols() {
            return Err(TensorError::ShapeMismatch {
                left: (self.rows, self.cols()),
                right: (other.rows, other.cols()),
            });
        }
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                SparseVec::from_sorted(self.rows, a.clone())
                    .add_scaled(c, &SparseVec::from_sorted(self.rows, b.clone()))
                    .into_entries()
            })
            .collect();
        Ok(LinMap { rows: self.rows, cols })
    }

    pub fn add(&self, other: &LinMap) -> Result<LinMap, TensorError> {
        self.add_scaled(&RatFunc::one(), other)
    }

    pub fn sub(&self, other: &LinMap) -> Result<LinMap, TensorError> {
        self.add_scaled(&RatFunc::from_int(-1), other)
    }

    pub fn scale(&self, c: &RatFunc) -> LinMap {
        if c.is_zero() {
            return LinMap::zero(self.rows, self.cols());
        }
        LinMap {
            rows: self.rows,
            cols: self.cols.iter().map(|col| col.iter().map(|(r, v)| (*r, v * c)).collect()).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &LinMap) -> LinMap {
        let mut cols = Vec::with_capacity(self.cols() * other.cols());
        for a in &self.cols {
            for b in &other.cols {
                let mut col = Vec::with_capacity(a.len() * b.len());
                for (i, x) in a {
                    for (j, z) in b {
                        col.push((i * other.rows + j, x * z));
                    }
                }
                cols.push(col);
            }
        }
        LinMap { rows: self.rows * other.rows, cols }
    }

    /// `id_{left} ⊗ op ⊗ id_{right}` where `left` and `right` are dimensions.
    pub fn place_dims(op: &LinMap, left: usize, right: usize) -> LinMap {
        let (orows, ocols) = (op.rows, op.cols());
        let mut cols = Vec::with_capacity(left * ocols * right);
        for a in 0..left {
            for x in 0..ocols {
                for b in 0..right {
                    cols.push(
                        op.cols[x].iter().map(|(r, v)| ((a * orows + r) * right + b, v.clone())).collect(),
                    );
                }
            }
        }
        LinMap { rows: left * orows * right, cols }
    }

    /// `id^{⊗left} ⊗ op ⊗ id^{⊗right}` on tensor powers of an `m`-dimensional space.
    pub fn place(op: &LinMap, m: usize, left: usize, right: usize) -> LinMap {
        Self::place_dims(op, m.pow(left as u32), m.pow(right as u32))
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> LinMap {
        LinMap { rows: self.rows, cols: cols.iter().map(|&c| self.cols[c].clone()).collect() }
    }

    /// Stack `self` above `other`.
    pub fn vstack(&self, other: &LinMap) -> Result<LinMap, TensorError> {
        if self.cols() != other.cols() {
            return Err(TensorError::DimensionMismatch { expected: self.cols(), found: other.cols() });
        }
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut c = a.clone();
                c.extend(b.iter().map(|(r, v)| (r + self.rows, v.clone())));
                c
            })
            .collect();
        Ok(LinMap { rows: self.rows + other.rows, cols })
    }

    /// Place `self` left of `other`.
    pub fn hstack(&self, other: &LinMap) -> Result<LinMap, TensorError> {
        if self.rows != other.rows {
            return Err(TensorError::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(LinMap { rows: self.rows, cols })
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols(),
            entries: self.triplets().map(|(r, c, v)| (r, c, v.to_string())).collect(),
        }
    }

    pub fn from_json(j: &MatrixJson) -> Result<LinMap, TensorError> {
        let mut trip = Vec::with_capacity(j.entries.len());
        for (r, c, s) in &j.entries {
            trip.push((*r, *c, RatFunc::parse(s)?));
        }
        Self::from_triplets(j.rows, j.cols, trip)
    }
}

/// `{ "rows": r, "cols": c, "entries": [[i, j, "poly"], ...] }`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}
