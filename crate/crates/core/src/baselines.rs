//! Structure-only (DeepWalk) and attribute-only (AttrPure) baselines.

use nalgebra::DMatrix;

use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, tags};
use crate::sgns::{embed_corpus, TrainConfig};
use crate::sparse::CsrMatrix;
use crate::svd::{randomized_svd, RandomizedSvdConfig};
use crate::transition::row_normalize;
use crate::walker::{generate_walks, WalkConfig};

/// Weighted walks on the raw adjacency, then SGNS. Takes the adjacency
/// alone, so attributes cannot leak in.
pub fn deepwalk_embed(adjacency: &CsrMatrix, walk: &WalkConfig, train: &TrainConfig) -> Result<EmbeddingMatrix> {
    if adjacency.nnz() == 0 {
        return Err(Error::InvalidConfig("DeepWalk needs at least one link".into()));
    }
    let transition = row_normalize(adjacency)?;
    let corpus = generate_walks(&transition, walk);
    embed_corpus(&corpus, train)
}

/// Rows scaled to unit length; zero rows stay zero.
fn unit_rows(attributes: &CsrMatrix) -> Result<CsrMatrix> {
    let rows = attributes.rows().map(|r| {
        let norm = r.norm();
        r.iter()
            .map(move |(c, v)| (c, if norm > 0.0 { v / norm } else { 0.0 }))
            .collect::<Vec<_>>()
    });
    CsrMatrix::from_rows(attributes.n_cols(), rows)
}

/// Rank-`dim` factor `U Σ^{1/2}` of the full cosine similarity matrix.
///
/// The similarity matrix is the Gram matrix of the unit-normalized
/// attribute rows, so products with it go through the sparse attributes and
/// the `n x n` matrix is never formed.
pub fn attrpure_embed(attributes: &CsrMatrix, dim: usize, seed: u64) -> Result<EmbeddingMatrix> {
    let n = attributes.n_rows();
    if dim == 0 || n < dim {
        return Err(Error::InvalidConfig(format!(
            "AttrPure needs 1 <= dim <= n, got dim {dim} for {n} nodes"
        )));
    }
    let unit = unit_rows(attributes)?;
    let apply = |x: &DMatrix<f64>| {
        let k = x.ncols();
        let row_major: Vec<f64> = x.transpose().as_slice().to_vec();
        let inner = unit.tr_mul_dense(&row_major, k);
        let out = unit.mul_dense(&inner, k);
        DMatrix::from_row_slice(n, k, &out)
    };
    let cfg = RandomizedSvdConfig {
        seed: derive_seed(seed, tags::SVD),
        ..RandomizedSvdConfig::default()
    };
    let svd = randomized_svd(n, dim, &cfg, apply)?;
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n {
        for j in 0..dim {
            data.push(svd.u[(i, j)] * svd.sigma[j].max(0.0).sqrt());
        }
    }
    EmbeddingMatrix::from_vec(n, dim, data)
}
