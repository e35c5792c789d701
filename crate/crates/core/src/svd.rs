//! Randomized truncated SVD of a symmetric operator given only through
//! matrix products.

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::seeded;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomizedSvdConfig {
    pub oversampling: usize,
    pub power_iterations: usize,
    pub seed: u64,
}

impl Default for RandomizedSvdConfig {
    fn default() -> Self {
        RandomizedSvdConfig {
            oversampling: 10,
            power_iterations: 4,
            seed: 0,
        }
    }
}

/// Leading `rank` singular triplets: `u` is `n x rank`, `sigma` descending.
#[derive(Debug, Clone)]
pub struct TruncatedSvd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
}

/// Flips each column so its largest-magnitude entry is positive.
pub fn fix_column_signs(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        let mut best = 0.0f64;
        for &v in col.iter() {
            if v.abs() > best.abs() {
                best = v;
            }
        }
        if best < 0.0 {
            col.neg_mut();
        }
    }
}

/// Halko–Martinsson–Tropp range finder with subspace iteration.
/// `apply(x)` must return `S x` for an `n x k` input.
pub fn randomized_svd<F>(n: usize, rank: usize, cfg: &RandomizedSvdConfig, apply: F) -> Result<TruncatedSvd>
where
    F: Fn(&DMatrix<f64>) -> DMatrix<f64>,
{
    if rank == 0 || rank > n {
        return Err(Error::InvalidConfig(format!("rank {rank} not in 1..={n}")));
    }
    let width = (rank + cfg.oversampling).min(n);
    let mut rng = seeded(cfg.seed);
    let omega = DMatrix::from_fn(n, width, |_, _| StandardNormal.sample(&mut rng));
    let mut q = apply(&omega).qr().q();
    for _ in 0..cfg.power_iterations {
        q = apply(&q).qr().q();
    }
    // S symmetric: Qᵀ S = (S Q)ᵀ
    let b = apply(&q).transpose();
    let svd = b.svd(true, false);
    let u_small = svd.u.ok_or_else(|| Error::Unsupported("SVD did not converge".into()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &c| svd.singular_values[c].total_cmp(&svd.singular_values[a]));
    let order = &order[..rank];
    let picked = DMatrix::from_fn(u_small.nrows(), rank, |i, j| u_small[(i, order[j])]);
    let mut u = q * picked;
    fix_column_signs(&mut u);
    Ok(TruncatedSvd {
        u,
        sigma: order.iter().map(|&k| svd.singular_values[k]).collect(),
    })
}
