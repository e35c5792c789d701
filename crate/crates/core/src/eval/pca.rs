use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::{LabelSet, NodeIndex};
use crate::svd::fix_column_signs;

#[derive(Debug, Clone, PartialEq)]
pub struct Pca2d {
    pub coords: Vec<[f64; 2]>,
    /// Variance along each of the two components.
    pub explained_variance: [f64; 2],
    pub total_variance: f64,
}

/// Projects mean-centered rows onto the top two principal axes. Each axis
/// is oriented so its largest-magnitude loading is positive.
pub fn pca_2d(z: &EmbeddingMatrix) -> Result<Pca2d> {
    let (n, d) = (z.n(), z.dim());
    if n < 2 {
        return Err(Error::InvalidConfig("PCA needs at least two points".into()));
    }
    if d == 0 {
        return Err(Error::InvalidConfig("PCA needs at least one dimension".into()));
    }
    let x = DMatrix::from_row_slice(n, d, z.as_slice());
    let mean = x.row_mean();
    let centered = DMatrix::from_fn(n, d, |i, j| x[(i, j)] - mean[j]);
    let cov = centered.transpose() * &centered / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let k = d.min(2);
    let mut axes = DMatrix::zeros(d, 2);
    for (slot, &idx) in order.iter().take(k).enumerate() {
        axes.set_column(slot, &eig.eigenvectors.column(idx));
    }
    fix_column_signs(&mut axes);
    let projected = &centered * &axes;
    let variance = |slot: usize| if slot < k { eig.eigenvalues[order[slot]].max(0.0) } else { 0.0 };
    Ok(Pca2d {
        coords: (0..n).map(|i| [projected[(i, 0)], projected[(i, 1)]]).collect(),
        explained_variance: [variance(0), variance(1)],
        total_variance: eig.eigenvalues.iter().map(|v| v.max(0.0)).sum(),
    })
}

/// `id x y label` lines; unlabeled nodes get `-`.
pub fn coordinates_to_text(nodes: &NodeIndex, pca: &Pca2d, labels: Option<&LabelSet>) -> String {
    let mut out = String::new();
    for (i, [x, y]) in pca.coords.iter().enumerate() {
        let label = labels.and_then(|l| l.get(i)).unwrap_or("-");
        let _ = writeln!(out, "{} {x} {y} {label}", nodes.id(i));
    }
    out
}
