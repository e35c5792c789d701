//! Compressed sparse row storage used for adjacency, attributes and
//! transition matrices.

use crate::error::{Error, Result};

/// Row-major sparse matrix. Column indices within a row are strictly
/// increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

/// Borrowed view of one CSR row.
#[derive(Debug, Clone, Copy)]
pub struct SparseRow<'a> {
    pub indices: &'a [usize],
    pub values: &'a [f64],
}

impl<'a> SparseRow<'a> {
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + 'a {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn dot(&self, other: &SparseRow<'_>) -> f64 {
        let (mut a, mut b) = (0, 0);
        let mut acc = 0.0;
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn get(&self, col: usize) -> f64 {
        match self.indices.binary_search(&col) {
            Ok(pos) => self.values[pos],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (c, v) in self.iter() {
            out[c] = v;
        }
        out
    }
}

impl CsrMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        CsrMatrix {
            n_rows,
            n_cols,
            indptr: vec![0; n_rows + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    /// Builds from already-sorted rows of `(column, value)` pairs. Explicit
    /// zeros are dropped.
    pub fn from_rows<I, R>(n_cols: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = (usize, f64)>,
    {
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut data = Vec::new();
        for row in rows {
            let start = indices.len();
            for (c, v) in row {
                if c >= n_cols {
                    return Err(Error::DimensionMismatch(format!(
                        "column {c} out of range for {n_cols} columns"
                    )));
                }
                if indices.len() > start && indices[indices.len() - 1] >= c {
                    return Err(Error::DimensionMismatch(format!(
                        "row {} columns not strictly increasing",
                        indptr.len() - 1
                    )));
                }
                if v != 0.0 {
                    indices.push(c);
                    data.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(CsrMatrix {
            n_rows: indptr.len() - 1,
            n_cols,
            indptr,
            indices,
            data,
        })
    }

    /// Builds from unordered triplets; duplicate coordinates keep the last
    /// value.
    pub fn from_triplets(n_rows: usize, n_cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_rows];
        for &(r, c, v) in triplets {
            if r >= n_rows || c >= n_cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols}"
                )));
            }
            rows[r].push((c, v));
        }
        for row in &mut rows {
            // stable sort keeps insertion order among duplicates
            row.sort_by_key(|&(c, _)| c);
            let mut dedup: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match dedup.last_mut() {
                    Some(last) if last.0 == c => last.1 = v,
                    _ => dedup.push((c, v)),
                }
            }
            *row = dedup;
        }
        CsrMatrix::from_rows(n_cols, rows)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn row(&self, i: usize) -> SparseRow<'_> {
        let (s, e) = (self.indptr[i], self.indptr[i + 1]);
        SparseRow {
            indices: &self.indices[s..e],
            values: &self.data[s..e],
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = SparseRow<'_>> {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).get(j)
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn scale(&self, c: f64) -> CsrMatrix {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.to_dense(self.n_cols)).collect()
    }

    /// `self * x` for a dense row-major `x` with `k` columns.
    pub fn mul_dense(&self, x: &[f64], k: usize) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols * k);
        let mut out = vec![0.0; self.n_rows * k];
        for (i, row) in self.rows().enumerate() {
            let dst = &mut out[i * k..(i + 1) * k];
            for (c, v) in row.iter() {
                for (d, s) in dst.iter_mut().zip(&x[c * k..(c + 1) * k]) {
                    *d += v * s;
                }
            }
        }
        out
    }

    /// `selfᵀ * x` for a dense row-major `x` with `k` columns.
    pub fn tr_mul_dense(&self, x: &[f64], k: usize) -> Vec<f64> {
        assert_eq!(x.len(), self.n_rows * k);
        let mut out = vec![0.0; self.n_cols * k];
        for (i, row) in self.rows().enumerate() {
            let src = &x[i * k..(i + 1) * k];
            for (c, v) in row.iter() {
                for (d, s) in out[c * k..(c + 1) * k].iter_mut().zip(src) {
                    *d += v * s;
                }
            }
        }
        out
    }

    /// Column-major inverted index: for every column the rows holding a
    /// nonzero, with values.
    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.n_cols {
            counts[c + 1] += counts[c];
        }
        let mut cursor = counts.clone();
        let mut indices = vec![0; self.nnz()];
        let mut data = vec![0.0; self.nnz()];
        for (i, row) in self.rows().enumerate() {
            for (c, v) in row.iter() {
                let pos = cursor[c];
                indices[pos] = i;
                data[pos] = v;
                cursor[c] += 1;
            }
        }
        CsrMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            indptr: counts,
            indices,
            data,
        }
    }
}
