use std::fmt;

use itertools::Itertools;

use super::field::Field;
use crate::error::{Error, Result};

/// Dense matrix over a prime field, stored row-major with entries in `[0, q)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GfMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl GfMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        GfMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod q.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(field, rows, cols)
    }

    /// Like [`GfMatrix::from_rows`] but with an explicit column count, so that
    /// matrices with zero rows keep their shape.
    pub fn from_rows_with_cols(field: Field, rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, field.elem(v));
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {c} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v % field.order());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.order());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.cols).map(|c| self.column(c))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b != 0 {
                        let v = f.add(out.get(r, c), f.mul(a, b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `x * self`.
    pub fn left_apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.rows);
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(xr, self.get(r, c)));
            }
        }
        out
    }

    /// Matrix times column vector: `self * v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &GfMatrix) -> Result<GfMatrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot concatenate {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> GfMatrix {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> GfMatrix {
        let mut out = Self::zeros(self.field, rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            out.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    /// Reduced row echelon form together with the pivot column of each nonzero row.
    pub fn rref(&self) -> (GfMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// One solution `d` of `self * d = t`, with every free variable set to zero,
    /// or `None` when `t` is outside the column space.
    pub fn solve(&self, t: &[u32]) -> Result<Option<Vec<u32>>> {
        if t.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "target has length {}, matrix has {} rows",
                t.len(),
                self.rows
            )));
        }
        let target = GfMatrix::from_columns(self.field, self.rows, &[t.to_vec()])?;
        let (reduced, pivots) = self.hstack(&target)?.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut d = vec![0u32; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            d[pc] = reduced.get(r, self.cols);
        }
        Ok(Some(d))
    }

    /// Minimum-Hamming-weight `d` with `self * d = t`.
    ///
    /// Supports are tried in order of increasing size and, within a size, in
    /// lexicographic order; the first support that admits a solution with all
    /// coefficients nonzero wins. At the minimum weight every feasible support
    /// has independent columns (otherwise a smaller support would exist), so
    /// the coefficients on it are unique.
    pub fn min_weight_solution(&self, t: &[u32], wt_cap: usize) -> Result<Vec<u32>> {
        if self.solve(t)?.is_none() {
            return Err(Error::UnreachableTarget);
        }
        if t.iter().all(|&v| v == 0) {
            return Ok(vec![0; self.cols]);
        }
        for weight in 1..=wt_cap.min(self.cols) {
            for support in (0..self.cols).combinations(weight) {
                let sub = self.select_columns(&support);
                if sub.rank() != weight {
                    continue;
                }
                let Some(coeffs) = sub.solve(t)? else {
                    continue;
                };
                if coeffs.iter().all(|&c| c != 0) {
                    let mut d = vec![0u32; self.cols];
                    for (&c, &v) in support.iter().zip(&coeffs) {
                        d[c] = v;
                    }
                    return Ok(d);
                }
            }
        }
        Err(Error::CapExceeded(wt_cap))
    }

    /// True iff every column of `a` lies in the column space of `self`.
    pub fn column_space_contains(&self, a: &GfMatrix) -> Result<bool> {
        if self.rows != a.rows {
            return Err(Error::DimensionMismatch(format!(
                "row counts differ: {} vs {}",
                self.rows, a.rows
            )));
        }
        Ok(self.hstack(a)?.rank() == self.rank())
    }

    /// Basis of the right kernel `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let (reduced, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(reduced.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Indices of the first (in column order) maximal independent column subset.
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn check_field(&self, other: &GfMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "field mismatch: {} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GfMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

pub fn hamming_weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}
