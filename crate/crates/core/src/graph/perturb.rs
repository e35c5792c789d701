//! Incompleteness simulation: random link removal and non-link sampling.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use super::{link_key, AttributedGraph, EdgeSample, Link, Polarity};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded, tags};

/// Removes `⌊fraction·|E|⌋` links chosen uniformly at random. Returns the
/// reduced graph and the removed links in draw order.
pub fn remove_links(graph: &AttributedGraph, fraction: f64, seed: u64) -> Result<(AttributedGraph, Vec<Link>)> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidConfig(format!(
            "removal fraction {fraction} outside [0, 1]"
        )));
    }
    let total = graph.num_links();
    // tolerate products like 0.29 * 100 = 28.999999999999996
    let count = ((fraction * total as f64) + 1e-9).floor() as usize;
    let count = count.min(total);
    let mut rng = seeded(derive_seed(seed, tags::REMOVE_LINKS));
    let picked = index::sample(&mut rng, total, count).into_vec();
    let mut drop = vec![false; total];
    for &i in &picked {
        drop[i] = true;
    }
    let removed: Vec<Link> = picked.iter().map(|&i| graph.links()[i]).collect();
    let kept: Vec<Link> = graph
        .links()
        .iter()
        .zip(&drop)
        .filter(|(_, &d)| !d)
        .map(|(l, _)| *l)
        .collect();
    Ok((graph.with_links(kept)?, removed))
}

/// Draws `count` distinct node pairs that are not linked in `graph`.
///
/// Sparse regimes use rejection sampling under an attempt budget; when the
/// request is more than half of all non-links the candidates are enumerated
/// instead.
pub fn sample_negative_edges(graph: &AttributedGraph, count: usize, seed: u64) -> Result<Vec<EdgeSample>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let n = graph.num_nodes();
    let directed = graph.is_directed();
    let pairs = if directed {
        n * n.saturating_sub(1)
    } else {
        n * n.saturating_sub(1) / 2
    };
    let available = pairs.saturating_sub(graph.num_links());
    if count > available {
        return Err(Error::InsufficientNonLinks {
            requested: count,
            found: available,
        });
    }
    let mut rng = seeded(derive_seed(seed, tags::NEGATIVE_EDGES));
    let negative = |src, dst| EdgeSample {
        src,
        dst,
        polarity: Polarity::Negative,
    };

    if 2 * count > available {
        let mut candidates = Vec::with_capacity(available);
        for src in 0..n {
            let start = if directed { 0 } else { src + 1 };
            for dst in start..n {
                if src != dst && !graph.has_link(src, dst) {
                    candidates.push((src, dst));
                }
            }
        }
        return Ok(index::sample(&mut rng, candidates.len(), count)
            .into_iter()
            .map(|i| negative(candidates[i].0, candidates[i].1))
            .collect());
    }

    let budget = 50 * count + 1000;
    let mut chosen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for _ in 0..budget {
        let src = rng.random_range(0..n);
        let dst = rng.random_range(0..n);
        if src == dst || graph.has_link(src, dst) {
            continue;
        }
        if chosen.insert(link_key(src, dst, directed)) {
            out.push(negative(src, dst));
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(Error::InsufficientNonLinks {
        requested: count,
        found: out.len(),
    })
}
