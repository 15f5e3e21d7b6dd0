use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest state count for which dense linear algebra is attempted.
pub const DENSE_CAP: usize = 4096;

/// Row-stochastic tolerance used when assembling matrices.
pub const STOCHASTIC_TOL: f64 = 1e-10;

/// A row-stochastic matrix in compressed sparse row form.
///
/// Sparse storage keeps construction and distribution propagation linear in
/// the number of transitions; eigen and linear solves convert to dense under
/// [`DENSE_CAP`].
#[derive(Debug)]
pub struct TransitionMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    stationary: OnceLock<Vec<f64>>,
}

impl Clone for TransitionMatrix {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.clone(),
            stationary: OnceLock::new(),
        }
    }
}

impl TransitionMatrix {
    /// Assemble from rows of `(column, value)`; duplicates are summed and
    /// exact zeros dropped. Every row must sum to one.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for (r, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|(c, _)| *c);
            let mut sum = 0.0;
            let start = cols.len();
            for (c, v) in row {
                if c >= n {
                    return Err(Error::DimensionMismatch { expected: n, found: c + 1 });
                }
                if !v.is_finite() || v < -STOCHASTIC_TOL {
                    return Err(Error::NotStochastic { row: r, sum: v });
                }
                sum += v;
                if cols.len() > start && *cols.last().unwrap() == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic { row: r, sum });
            }
            let mut k = start;
            while k < cols.len() {
                if vals[k] == 0.0 {
                    cols.remove(k);
                    vals.remove(k);
                } else {
                    k += 1;
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(Self { n, row_ptr, cols, vals, stationary: OnceLock::new() })
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let rows = (0..m.nrows())
            .map(|i| (0..m.ncols()).filter(|&j| m[(i, j)] != 0.0).map(|j| (j, m[(i, j)])).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows((0..n).map(|i| vec![(i, 1.0)]).collect()).expect("identity is stochastic")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (c, v) = self.row(i);
        c.binary_search(&j).map_or(0.0, |k| v[k])
    }

    /// Row vector times matrix: `μ P`.
    pub fn left_mul(&self, mu: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, &m) in mu.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            let (c, v) = self.row(i);
            for (j, p) in c.iter().zip(v) {
                out[*j] += m * p;
            }
        }
        out
    }

    /// Matrix times column vector: `P f`.
    pub fn right_mul(&self, f: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(j, p)| p * f[*j]).sum()
            })
            .collect()
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        if self.n > DENSE_CAP {
            return Err(Error::SpaceTooLarge { states: self.n, cap: DENSE_CAP });
        }
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (c, v) = self.row(i);
            for (j, p) in c.iter().zip(v) {
                m[(i, *j)] = *p;
            }
        }
        Ok(m)
    }

    /// `a P + (1 - a) Q`.
    pub fn convex(a: f64, p: &TransitionMatrix, q: &TransitionMatrix) -> Result<Self> {
        if p.n != q.n {
            return Err(Error::DimensionMismatch { expected: p.n, found: q.n });
        }
        let rows = (0..p.n)
            .map(|i| {
                let (pc, pv) = p.row(i);
                let (qc, qv) = q.row(i);
                pc.iter()
                    .zip(pv)
                    .map(|(c, v)| (*c, a * v))
                    .chain(qc.iter().zip(qv).map(|(c, v)| (*c, (1.0 - a) * v)))
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    /// The lazy chain `λ P + (1 - λ) I`.
    pub fn lazy(&self, lambda: f64) -> Result<Self> {
        Self::convex(lambda, self, &Self::identity(self.n))
    }

    /// The sub-chain on `order` (indices into this matrix), in that order.
    /// Fails if mass leaves the subset.
    pub fn restrict(&self, order: &[usize]) -> Result<Self> {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &s) in order.iter().enumerate() {
            pos[s] = k;
        }
        let rows = order
            .iter()
            .map(|&s| {
                let (c, v) = self.row(s);
                c.iter()
                    .zip(v)
                    .map(|(j, p)| if pos[*j] == usize::MAX { Err(Error::LeavesSupport { from: s }) } else { Ok((pos[*j], *p)) })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub(crate) fn cached_stationary(&self) -> &OnceLock<Vec<f64>> {
        &self.stationary
    }
}
