//! Structural, attribute and fused (biased) transition matrices.
//!
//! The attribute side is built one row at a time: cosine similarities of a
//! node against every other node, the `k` strongest kept, then normalized.
//! The dense `n x n` similarity matrix never exists in memory.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, SparseRow};

/// Tolerance on row sums of a stochastic row.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Sparse row-stochastic matrix. Each row is a next-hop distribution or
/// entirely empty (a dead end).
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix(CsrMatrix);

impl TransitionMatrix {
    /// Validates `m` as a transition matrix.
    pub fn from_csr(m: CsrMatrix) -> Result<Self> {
        if m.n_rows() != m.n_cols() {
            return Err(Error::DimensionMismatch(format!(
                "transition matrix must be square, got {}x{}",
                m.n_rows(),
                m.n_cols()
            )));
        }
        for (i, row) in m.rows().enumerate() {
            if row.values.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                return Err(Error::InvalidConfig(format!("row {i} has an entry outside [0, 1]")));
            }
            if !row.is_empty() && (row.sum() - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidConfig(format!("row {i} sums to {}", row.sum())));
            }
        }
        Ok(TransitionMatrix(m))
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = CsrMatrix::from_rows(n, rows.iter().map(|r| r.iter().copied().enumerate()))?;
        Self::from_csr(m)
    }

    pub fn n(&self) -> usize {
        self.0.n_rows()
    }

    pub fn row(&self, i: usize) -> SparseRow<'_> {
        self.0.row(i)
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.0.row(i).is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_csr(&self) -> &CsrMatrix {
        &self.0
    }

    pub fn nnz(&self) -> usize {
        self.0.nnz()
    }

    /// Debug dump, one `row col prob` line per stored entry.
    pub fn to_dump(&self) -> String {
        let mut out = String::new();
        for (i, row) in self.0.rows().enumerate() {
            for (j, p) in row.iter() {
                let _ = writeln!(out, "{i} {j} {p}");
            }
        }
        out
    }
}

/// Balancing factor between structure and attributes, and the number of
/// attribute neighbours kept per node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionConfig {
    pub alpha: f64,
    pub top_k: usize,
}

impl FusionConfig {
    pub fn new(alpha: f64, top_k: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidConfig(format!("alpha {alpha} outside [0, 1]")));
        }
        if top_k == 0 {
            return Err(Error::InvalidConfig("top_k must be at least 1".into()));
        }
        Ok(FusionConfig { alpha, top_k })
    }
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig { alpha: 0.8, top_k: 30 }
    }
}

fn normalize_row(entries: &mut Vec<(usize, f64)>) {
    let sum: f64 = entries.iter().map(|&(_, v)| v).sum();
    if sum > 0.0 {
        entries.iter_mut().for_each(|(_, v)| *v /= sum);
    } else {
        entries.clear();
    }
}

/// Divides each row by its sum. Rows summing to zero stay empty.
pub fn row_normalize(w: &CsrMatrix) -> Result<TransitionMatrix> {
    if w.n_rows() != w.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "adjacency must be square, got {}x{}",
            w.n_rows(),
            w.n_cols()
        )));
    }
    if w.values().iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidConfig("adjacency weights must be finite and nonnegative".into()));
    }
    let rows = (0..w.n_rows()).map(|i| {
        let mut entries: Vec<(usize, f64)> = w.row(i).iter().collect();
        normalize_row(&mut entries);
        entries
    });
    Ok(TransitionMatrix(CsrMatrix::from_rows(w.n_cols(), rows)?))
}

/// Cosine similarity engine over the rows of an attribute matrix.
///
/// Zero rows have similarity 0 to everything, the diagonal is 0, and
/// negative cosines are clamped to 0.
pub struct AttributeSimilarity<'a> {
    attributes: &'a CsrMatrix,
    by_column: CsrMatrix,
    norms: Vec<f64>,
}

impl<'a> AttributeSimilarity<'a> {
    pub fn new(attributes: &'a CsrMatrix) -> Self {
        AttributeSimilarity {
            attributes,
            by_column: attributes.transpose(),
            norms: attributes.rows().map(|r| r.norm()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.attributes.n_rows()
    }

    /// Positive similarities of node `i` as unsorted `(j, s)` pairs.
    /// `dots` must be an all-zero buffer of length n and is left zeroed.
    fn positive_entries(&self, i: usize, dots: &mut [f64], touched: &mut Vec<usize>) -> Vec<(usize, f64)> {
        touched.clear();
        let ni = self.norms[i];
        if ni == 0.0 {
            return Vec::new();
        }
        for (c, v) in self.attributes.row(i).iter() {
            for (j, w) in self.by_column.row(c).iter() {
                if dots[j] == 0.0 {
                    touched.push(j);
                }
                dots[j] += v * w;
            }
        }
        let mut out = Vec::with_capacity(touched.len());
        touched.sort_unstable();
        touched.dedup();
        for &j in touched.iter() {
            let dot = dots[j];
            dots[j] = 0.0;
            let nj = self.norms[j];
            if j == i || nj == 0.0 {
                continue;
            }
            let s = dot / (ni * nj);
            if s > 0.0 {
                out.push((j, s));
            }
        }
        out
    }

    /// Dense similarity row for node `i`.
    pub fn row(&self, i: usize) -> Vec<f64> {
        let mut dots = vec![0.0; self.n()];
        let mut touched = Vec::new();
        let mut out = vec![0.0; self.n()];
        for (j, s) in self.positive_entries(i, &mut dots, &mut touched) {
            out[j] = s;
        }
        out
    }
}

pub fn attribute_similarity_row(attributes: &CsrMatrix, i: usize) -> Vec<f64> {
    AttributeSimilarity::new(attributes).row(i)
}

/// Orders by value descending, then column ascending.
fn topk_order(a: &(usize, f64), b: &(usize, f64)) -> Ordering {
    b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0))
}

fn keep_topk(mut entries: Vec<(usize, f64)>, k: usize) -> Vec<(usize, f64)> {
    if entries.len() > k {
        // introselect; the comparator is a total order so ties resolve by index
        entries.select_nth_unstable_by(k - 1, topk_order);
        entries.truncate(k);
    }
    entries.sort_unstable_by_key(|&(j, _)| j);
    entries
}

/// Keeps the `k` largest strictly positive entries of `row` (ties go to the
/// smaller column) as `(column, value)` pairs sorted by column.
pub fn sparsify_topk(row: &[f64], k: usize) -> Vec<(usize, f64)> {
    assert!(k >= 1, "top_k must be at least 1");
    let positives = row.iter().copied().enumerate().filter(|&(_, v)| v > 0.0).collect();
    keep_topk(positives, k)
}

/// Row-normalized top-k cosine similarity graph over the attribute rows.
pub fn build_attribute_transition(attributes: &CsrMatrix, top_k: usize) -> Result<TransitionMatrix> {
    if top_k == 0 {
        return Err(Error::InvalidConfig("top_k must be at least 1".into()));
    }
    let sim = AttributeSimilarity::new(attributes);
    let n = sim.n();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0.0; n], Vec::new()),
            |(dots, touched), i| {
                let mut kept = keep_topk(sim.positive_entries(i, dots, touched), top_k);
                normalize_row(&mut kept);
                kept
            },
        )
        .collect();
    Ok(TransitionMatrix(CsrMatrix::from_rows(n, rows)?))
}

/// Fuses structural and attribute rows. A row empty on one side takes the
/// other side unchanged; otherwise `alpha·T^W + (1 − alpha)·T^A`.
pub fn build_biased_transition(
    structural: &TransitionMatrix,
    attribute: &TransitionMatrix,
    alpha: f64,
) -> Result<TransitionMatrix> {
    if structural.n() != attribute.n() {
        return Err(Error::DimensionMismatch(format!(
            "structural matrix is {0}x{0} but attribute matrix is {1}x{1}",
            structural.n(),
            attribute.n()
        )));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidConfig(format!("alpha {alpha} outside [0, 1]")));
    }
    let n = structural.n();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (w, a) = (structural.row(i), attribute.row(i));
            if w.is_empty() {
                return a.iter().collect();
            }
            if a.is_empty() {
                return w.iter().collect();
            }
            merge_rows(w, a, alpha)
        })
        .collect();
    Ok(TransitionMatrix(CsrMatrix::from_rows(n, rows)?))
}

fn merge_rows(w: SparseRow<'_>, a: SparseRow<'_>, alpha: f64) -> Vec<(usize, f64)> {
    let beta = 1.0 - alpha;
    let mut out = Vec::with_capacity(w.nnz() + a.nnz());
    let (mut p, mut q) = (0, 0);
    while p < w.nnz() || q < a.nnz() {
        let wc = w.indices.get(p).copied().unwrap_or(usize::MAX);
        let ac = a.indices.get(q).copied().unwrap_or(usize::MAX);
        match wc.cmp(&ac) {
            Ordering::Less => {
                out.push((wc, alpha * w.values[p]));
                p += 1;
            }
            Ordering::Greater => {
                out.push((ac, beta * a.values[q]));
                q += 1;
            }
            Ordering::Equal => {
                out.push((wc, alpha * w.values[p] + beta * a.values[q]));
                p += 1;
                q += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn csr(rows: &[Vec<f64>]) -> CsrMatrix {
        let m = rows.first().map_or(0, Vec::len);
        CsrMatrix::from_rows(m, rows.iter().map(|r| r.iter().copied().enumerate())).unwrap()
    }

    #[test]
    fn normalizes_rows() {
        let t = row_normalize(&csr(&[vec![2.0, 2.0, 0.0], vec![0.0; 3], vec![1.0, 3.0, 0.0]])).unwrap();
        assert_eq!(t.row(0).to_dense(3), vec![0.5, 0.5, 0.0]);
        assert!(t.is_zero_row(1));
        assert_eq!(t.row(2).to_dense(3), vec![0.25, 0.75, 0.0]);
    }

    #[test]
    fn normalize_rejects_non_square() {
        assert!(row_normalize(&CsrMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn similarity_examples() {
        let a = csr(&[vec![1.0, 2.0, 0.0], vec![2.0, 1.0, 1.0], vec![1.0, 2.0, 0.0], vec![0.0; 3]]);
        let s = attribute_similarity_row(&a, 0);
        assert_abs_diff_eq!(s[1], 4.0 / (5f64.sqrt() * 6f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(s[1], 0.730297, epsilon = 1e-6);
        assert_abs_diff_eq!(s[2], 1.0, epsilon = 1e-15);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[3], 0.0);
        assert!(attribute_similarity_row(&a, 3).iter().all(|&v| v == 0.0));

        let orth = csr(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(attribute_similarity_row(&orth, 0)[1], 0.0);
    }

    #[test]
    fn negative_cosine_is_clamped() {
        let a = csr(&[vec![1.0, 0.0], vec![-1.0, 0.1]]);
        assert_eq!(attribute_similarity_row(&a, 0)[1], 0.0);
    }

    #[test]
    fn topk_examples() {
        let cols = |v: Vec<(usize, f64)>| v.into_iter().map(|(j, _)| j).collect::<Vec<_>>();
        assert_eq!(cols(sparsify_topk(&[0.9, 0.5, 0.1, 0.7], 2)), vec![0, 3]);
        assert_eq!(cols(sparsify_topk(&[0.4, 0.4, 0.4], 2)), vec![0, 1]);
        assert!(sparsify_topk(&[0.0; 4], 3).is_empty());
        assert_eq!(cols(sparsify_topk(&[0.0, 0.2, 0.1], 10)), vec![1, 2]);
    }

    #[test]
    fn identical_neighbours_split_evenly() {
        let a = csr(&[vec![1.0, 1.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![0.0, 0.0]]);
        let t = build_attribute_transition(&a, 30).unwrap();
        assert_eq!(t.row(0).to_dense(4), vec![0.0, 0.5, 0.5, 0.0]);
        assert!(t.is_zero_row(3));
    }

    #[test]
    fn fusion_examples() {
        let tw = TransitionMatrix::from_dense(&[vec![0.5, 0.5, 0.0], vec![0.0; 3], vec![0.0, 1.0, 0.0]]).unwrap();
        let ta = TransitionMatrix::from_dense(&[vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], vec![0.0; 3]]).unwrap();
        let t = build_biased_transition(&tw, &ta, 0.8).unwrap();
        let r0 = t.row(0).to_dense(3);
        assert_abs_diff_eq!(r0[0], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r0[1], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r0[2], 0.2, epsilon = 1e-15);
        assert_eq!(t.row(1).to_dense(3), vec![0.0, 1.0, 0.0]);
        assert_eq!(t.row(2).to_dense(3), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn fusion_dimension_mismatch() {
        let a = TransitionMatrix::from_dense(&[vec![1.0]]).unwrap();
        let b = TransitionMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(build_biased_transition(&a, &b, 0.5), Err(Error::DimensionMismatch(_))));
        assert!(build_biased_transition(&b, &b, 1.5).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(FusionConfig::new(0.8, 30).is_ok());
        assert!(FusionConfig::new(1.2, 30).is_err());
        assert!(FusionConfig::new(0.5, 0).is_err());
    }

    #[test]
    fn dump_format() {
        let t = TransitionMatrix::from_dense(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(t.to_dump(), "0 1 1\n");
    }
}
