//! Row-wise sparse matrices over an exact field.
//!
//! Every algorithm in the crate touches matrices one row at a time, so rows
//! are ordered `column -> value` maps and there is no column index.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// A sparse vector. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<F> {
    entries: BTreeMap<usize, F>,
}

impl<F: Field> Default for SparseVec<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: fmt::Debug> fmt::Debug for SparseVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

impl<F: Field> SparseVec<F> {
    pub fn new() -> Self {
        SparseVec {
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(index: usize) -> Self {
        let mut v = Self::new();
        v.entries.insert(index, F::one());
        v
    }

    pub fn from_dense(values: &[F]) -> Self {
        values
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect()
    }

    pub fn from_i64(values: &[i64]) -> Self {
        values
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, F::from_i64(x)))
            .collect()
    }

    pub fn get(&self, index: usize) -> F {
        self.entries.get(&index).cloned().unwrap_or_else(F::zero)
    }

    pub fn set(&mut self, index: usize, value: F) {
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &F)> + '_ {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Leading (leftmost) nonzero entry.
    pub fn leading(&self) -> Option<(usize, &F)> {
        self.entries.iter().next().map(|(&i, x)| (i, x))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    /// `self += coeff * other`.
    pub fn add_scaled(&mut self, coeff: &F, other: &SparseVec<F>) {
        if coeff.is_zero() {
            return;
        }
        for (&i, x) in &other.entries {
            let term = coeff.mul(x);
            match self.entries.get_mut(&i) {
                Some(y) => {
                    *y = y.add(&term);
                    if y.is_zero() {
                        self.entries.remove(&i);
                    }
                }
                None => {
                    self.entries.insert(i, term);
                }
            }
        }
    }

    pub fn scaled(&self, coeff: &F) -> SparseVec<F> {
        if coeff.is_zero() {
            return Self::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(&i, x)| (i, x.mul(coeff)))
                .collect(),
        }
    }

    pub fn dot(&self, other: &SparseVec<F>) -> F {
        let (small, large) = if self.nnz() <= other.nnz() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .filter_map(|(i, x)| large.entries.get(i).map(|y| x.mul(y)))
            .fold(F::zero(), |acc, t| acc.add(&t))
    }

    pub fn to_dense(&self, len: usize) -> Vec<F> {
        let mut out = vec![F::zero(); len];
        for (&i, x) in &self.entries {
            out[i] = x.clone();
        }
        out
    }

    /// Keeps entries whose index has an image under `map`, relabeled.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>) -> SparseVec<F> {
        self.entries
            .iter()
            .filter_map(|(&i, x)| map(i).map(|j| (j, x.clone())))
            .collect()
    }
}

impl<F: Field> FromIterator<(usize, F)> for SparseVec<F> {
    fn from_iter<I: IntoIterator<Item = (usize, F)>>(iter: I) -> Self {
        let mut v = SparseVec::new();
        for (i, x) in iter {
            let cur: F = v.get(i);
            v.set(i, cur.add(&x));
        }
        v
    }
}

/// Row-wise sparse matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseMatrix<F> {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<F>>,
}

impl<F: fmt::Debug> fmt::Debug for SparseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.nrows, self.ncols)?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Output of [`SparseMatrix::rref_with_transform`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReduction<F> {
    /// `reduced = transform * input`.
    pub reduced: SparseMatrix<F>,
    /// Unit lower-triangular.
    pub transform: SparseMatrix<F>,
    /// Column of the leading entry of each reduced row, `None` for zero rows.
    pub pivots: Vec<Option<usize>>,
}

impl<F: Field> RowReduction<F> {
    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![SparseVec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            nrows: n,
            ncols: n,
            rows: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec<F>>) -> Result<Self> {
        for row in &rows {
            if let Some(m) = row.max_index() {
                if m >= ncols {
                    return Err(Error::DimensionMismatch {
                        expected: ncols,
                        found: m + 1,
                    });
                }
            }
        }
        Ok(SparseMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        })
    }

    /// `nrows x cols.len()` matrix whose columns are `cols`.
    pub fn from_columns(nrows: usize, cols: &[SparseVec<F>]) -> Result<Self> {
        let mut m = SparseMatrix::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter() {
                if i >= nrows {
                    return Err(Error::DimensionMismatch {
                        expected: nrows,
                        found: i + 1,
                    });
                }
                m.rows[i].set(j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_dense(ncols: usize, rows: &[Vec<F>]) -> Result<Self> {
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
        }
        Ok(SparseMatrix {
            nrows: rows.len(),
            ncols,
            rows: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
        })
    }

    /// Convenience constructor from small integer literals.
    pub fn from_i64(ncols: usize, rows: &[&[i64]]) -> Result<Self> {
        let dense: Vec<Vec<F>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
            .collect();
        Self::from_dense(ncols, &dense)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn row(&self, i: usize) -> &SparseVec<F> {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseVec<F>> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: F) {
        assert!(i < self.nrows && j < self.ncols, "index out of bounds");
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: SparseVec<F>) -> Result<()> {
        if let Some(m) = row.max_index() {
            if m >= self.ncols {
                return Err(Error::DimensionMismatch {
                    expected: self.ncols,
                    found: m + 1,
                });
            }
        }
        self.rows.push(row);
        self.nrows += 1;
        Ok(())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SparseVec::is_zero)
    }

    /// Row-major triplets `(row, col, value)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, j, x)))
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        self.rows.iter().map(|r| r.to_dense(self.ncols)).collect()
    }

    pub fn transpose(&self) -> SparseMatrix<F> {
        let mut t = SparseMatrix::zeros(self.ncols, self.nrows);
        for (i, j, x) in self.triplets() {
            t.rows[j].entries.insert(i, x.clone());
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix<F>) -> Result<SparseMatrix<F>> {
        if self.ncols != rhs.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: rhs.nrows,
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = SparseVec::new();
                for (k, x) in r.iter() {
                    acc.add_scaled(x, &rhs.rows[k]);
                }
                acc
            })
            .collect();
        Ok(SparseMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            rows,
        })
    }

    /// `self * u` for a column vector `u`.
    pub fn mul_vec(&self, u: &SparseVec<F>) -> SparseVec<F> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.dot(u)))
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    /// `v^T * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut acc = SparseVec::new();
        for (i, x) in v.iter() {
            if i < self.nrows {
                acc.add_scaled(x, &self.rows[i]);
            }
        }
        acc
    }

    pub fn add(&self, rhs: &SparseMatrix<F>) -> Result<SparseMatrix<F>> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows * self.ncols,
                found: rhs.nrows * rhs.ncols,
            });
        }
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&rhs.rows) {
            r.add_scaled(&F::one(), o);
        }
        Ok(out)
    }

    pub fn scaled(&self, coeff: &F) -> SparseMatrix<F> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self.rows.iter().map(|r| r.scaled(coeff)).collect(),
        }
    }

    /// Submatrix on the given row and column index lists, in that order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix<F> {
        let colmap: HashMap<usize, usize> =
            cols.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        SparseMatrix {
            nrows: rows.len(),
            ncols: cols.len(),
            rows: rows
                .iter()
                .map(|&i| self.rows[i].remap(|j| colmap.get(&j).copied()))
                .collect(),
        }
    }

    pub fn vstack(&self, below: &SparseMatrix<F>) -> Result<SparseMatrix<F>> {
        if self.ncols != below.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: below.ncols,
            });
        }
        let mut out = self.clone();
        out.rows.extend(below.rows.iter().cloned());
        out.nrows += below.nrows;
        Ok(out)
    }

    /// Row reduction with transform tracking.
    ///
    /// Rows are processed top to bottom. Each row is reduced by adding
    /// multiples of rows above it until its leading entry sits in a column
    /// not yet claimed by an earlier row. Rows are never swapped, so the
    /// transform is unit lower-triangular and nonzero reduced rows have
    /// pairwise distinct leading columns.
    pub fn rref_with_transform(&self) -> RowReduction<F> {
        let mut reduced: Vec<SparseVec<F>> = Vec::with_capacity(self.nrows);
        let mut transform: Vec<SparseVec<F>> = Vec::with_capacity(self.nrows);
        let mut pivots: Vec<Option<usize>> = Vec::with_capacity(self.nrows);
        let mut owner: HashMap<usize, usize> = HashMap::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut r = row.clone();
            let mut u = SparseVec::unit(i);
            let pivot = loop {
                let Some((lead, x)) = r.leading() else {
                    break None;
                };
                match owner.get(&lead) {
                    Some(&j) => {
                        let c = x.div(&reduced[j].get(lead)).neg();
                        r.add_scaled(&c, &reduced[j]);
                        u.add_scaled(&c, &transform[j]);
                    }
                    None => {
                        owner.insert(lead, i);
                        break Some(lead);
                    }
                }
            };
            reduced.push(r);
            transform.push(u);
            pivots.push(pivot);
        }
        RowReduction {
            reduced: SparseMatrix {
                nrows: self.nrows,
                ncols: self.ncols,
                rows: reduced,
            },
            transform: SparseMatrix {
                nrows: self.nrows,
                ncols: self.nrows,
                rows: transform,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        // reduce the shorter side
        if self.ncols < self.nrows {
            SpanBasis::from_vectors(self.nrows, self.transpose().rows.iter()).rank()
        } else {
            SpanBasis::from_vectors(self.ncols, self.rows.iter()).rank()
        }
    }

    /// Basis of `{ v : v^T M = 0 }`, the orthogonal complement of the column
    /// space: rows of the transform aligned with zero rows of the reduction.
    pub fn left_null_basis(&self) -> Vec<SparseVec<F>> {
        let red = self.rref_with_transform();
        red.pivots
            .iter()
            .zip(red.transform.rows)
            .filter(|(p, _)| p.is_none())
            .map(|(_, u)| u)
            .collect()
    }

    /// Basis of `{ u : M u = 0 }`, as column vectors.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F>> {
        self.transpose().left_null_basis()
    }

    /// Whether `v` lies in the row span.
    pub fn row_membership(&self, v: &SparseVec<F>) -> Result<bool> {
        check_len(v, self.ncols)?;
        Ok(SpanBasis::from_vectors(self.ncols, self.rows.iter()).contains(v))
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<SparseMatrix<F>> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows,
                found: self.ncols,
            });
        }
        let n = self.nrows;
        // columns of the inverse: express each unit vector in the row span
        // of M^T, i.e. solve M x = e_i via the columns of M.
        let mut basis = SpanBasis::new(n);
        for col in self.transpose().rows.iter() {
            basis.insert(col);
        }
        if basis.rank() != n {
            return Err(Error::Invariant("matrix is singular".into()));
        }
        let cols: Vec<SparseVec<F>> = (0..n)
            .map(|i| basis.express(&SparseVec::unit(i)).expect("full rank"))
            .collect();
        SparseMatrix::from_columns(n, &cols)
    }
}

fn check_len<F: Field>(v: &SparseVec<F>, len: usize) -> Result<()> {
    match v.max_index() {
        Some(m) if m >= len => Err(Error::DimensionMismatch {
            expected: len,
            found: m + 1,
        }),
        _ => Ok(()),
    }
}

/// Incrementally built row-echelon basis of a span.
///
/// Every inserted vector gets a sequential index, whether or not it was
/// independent. Stored rows remember how they combine the inserted vectors,
/// which is what [`SpanBasis::express`] returns.
#[derive(Debug, Clone)]
pub struct SpanBasis<F> {
    len: usize,
    rows: Vec<SparseVec<F>>,
    combos: Vec<SparseVec<F>>,
    owner: HashMap<usize, usize>,
    inserted: usize,
}

impl<F: Field> SpanBasis<F> {
    pub fn new(len: usize) -> Self {
        SpanBasis {
            len,
            rows: Vec::new(),
            combos: Vec::new(),
            owner: HashMap::new(),
            inserted: 0,
        }
    }

    pub fn from_vectors<'a>(len: usize, vectors: impl IntoIterator<Item = &'a SparseVec<F>>) -> Self {
        let mut b = SpanBasis::new(len);
        for v in vectors {
            b.insert(v);
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Residual of `v` after elimination, with the combination of inserted
    /// vectors that was subtracted.
    fn reduce(&self, v: &SparseVec<F>) -> (SparseVec<F>, SparseVec<F>) {
        let mut r = v.clone();
        let mut c = SparseVec::new();
        while let Some((lead, x)) = r.leading() {
            let Some(&k) = self.owner.get(&lead) else {
                break;
            };
            let coeff = x.div(&self.rows[k].get(lead));
            r.add_scaled(&coeff.neg(), &self.rows[k]);
            c.add_scaled(&coeff, &self.combos[k]);
        }
        (r, c)
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v`; returns whether it was independent of the span.
    pub fn insert(&mut self, v: &SparseVec<F>) -> bool {
        debug_assert!(v.max_index().is_none_or(|m| m < self.len));
        let idx = self.inserted;
        self.inserted += 1;
        let (r, c) = self.reduce(v);
        let Some((lead, _)) = r.leading() else {
            return false;
        };
        let mut combo = c.scaled(&F::one().neg());
        combo.set(idx, F::one());
        self.owner.insert(lead, self.rows.len());
        self.rows.push(r);
        self.combos.push(combo);
        true
    }

    /// Coefficients `c` (indexed by insertion order) with `v = sum c_i x_i`,
    /// or `None` when `v` is outside the span.
    pub fn express(&self, v: &SparseVec<F>) -> Option<SparseVec<F>> {
        let (r, c) = self.reduce(v);
        r.is_zero().then_some(c)
    }
}
