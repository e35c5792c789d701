//! Weighted first-order random walks over a transition matrix.

use std::fmt::Write as _;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::alias::AliasTable;
use crate::error::{Error, Result};
use crate::graph::NodeIndex;
use crate::rng::{derive_seed, stream, tags};
use crate::transition::TransitionMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    pub walks_per_node: usize,
    /// Total nodes per walk, start node included.
    pub walk_length: usize,
    pub seed: u64,
}

impl WalkConfig {
    pub fn new(walks_per_node: usize, walk_length: usize, seed: u64) -> Result<Self> {
        if walks_per_node == 0 || walk_length == 0 {
            return Err(Error::InvalidConfig(
                "walks per node and walk length must both be at least 1".into(),
            ));
        }
        Ok(WalkConfig {
            walks_per_node,
            walk_length,
            seed,
        })
    }
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walks_per_node: 10,
            walk_length: 80,
            seed: 0,
        }
    }
}

/// Walks in round-major, then start-node order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<usize>>,
    /// Size of the node universe the walks are drawn from.
    pub num_nodes: usize,
}

impl WalkCorpus {
    pub fn new(walks: Vec<Vec<usize>>, num_nodes: usize) -> Result<Self> {
        if walks.iter().flatten().any(|&v| v >= num_nodes) {
            return Err(Error::DimensionMismatch(format!("walk node outside 0..{num_nodes}")));
        }
        Ok(WalkCorpus { walks, num_nodes })
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn num_tokens(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }

    /// Walks that stopped before `walk_length` at a dead end.
    pub fn truncated(&self, walk_length: usize) -> usize {
        self.walks.iter().filter(|w| w.len() < walk_length).count()
    }

    /// One walk per line, space-separated external ids.
    pub fn to_text(&self, nodes: &NodeIndex) -> String {
        let mut out = String::new();
        for walk in &self.walks {
            for (k, &v) in walk.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                out.push_str(nodes.id(v));
            }
            out.push('\n');
        }
        out
    }
}

/// Lazily built, shared alias tables for every row of a transition matrix.
pub struct AliasCache<'a> {
    transition: &'a TransitionMatrix,
    tables: Vec<OnceLock<Option<AliasTable>>>,
}

impl<'a> AliasCache<'a> {
    pub fn new(transition: &'a TransitionMatrix) -> Self {
        AliasCache {
            transition,
            tables: (0..transition.n()).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Table for `node`, or `None` for a dead end.
    pub fn get(&self, node: usize) -> Option<&AliasTable> {
        self.tables[node]
            .get_or_init(|| AliasTable::from_row(self.transition.row(node)).ok())
            .as_ref()
    }

    pub fn built(&self) -> usize {
        self.tables.iter().filter(|t| t.get().is_some()).count()
    }
}

/// Grows one walk from `start`; stops early at a node with an empty row.
pub fn walk_from(cache: &AliasCache<'_>, start: usize, length: usize, seed: u64, stream_id: u64) -> Vec<usize> {
    let mut rng = stream(seed, stream_id);
    let mut walk = Vec::with_capacity(length);
    walk.push(start);
    while walk.len() < length {
        let current = walk[walk.len() - 1];
        match cache.get(current) {
            Some(table) => walk.push(table.sample(&mut rng)),
            None => break,
        }
    }
    walk
}

/// `walks_per_node` rounds over every node. Each walk draws from its own
/// stream keyed by `(seed, round, start)`, so the corpus does not depend on
/// the number of worker threads.
pub fn generate_walks(transition: &TransitionMatrix, cfg: &WalkConfig) -> WalkCorpus {
    let n = transition.n();
    let cache = AliasCache::new(transition);
    let seed = derive_seed(cfg.seed, tags::WALKS);
    let walks = (0..cfg.walks_per_node * n)
        .into_par_iter()
        .map(|job| {
            let start = job % n;
            walk_from(&cache, start, cfg.walk_length, seed, job as u64)
        })
        .collect();
    WalkCorpus { walks, num_nodes: n }
}

/// Empirical next-hop frequencies of a corpus, row-normalized.
pub fn transition_frequencies(corpus: &WalkCorpus, n: usize) -> Vec<Vec<f64>> {
    let mut counts = vec![vec![0.0; n]; n];
    for walk in &corpus.walks {
        for pair in walk.windows(2) {
            counts[pair[0]][pair[1]] += 1.0;
        }
    }
    for row in &mut counts {
        let total: f64 = row.iter().sum();
        if total > 0.0 {
            row.iter_mut().for_each(|c| *c /= total);
        }
    }
    counts
}

/// Human-readable corpus statistics.
pub fn describe(corpus: &WalkCorpus, cfg: &WalkConfig) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{} walks, {} tokens, {} ended early at dead ends",
        corpus.len(),
        corpus.num_tokens(),
        corpus.truncated(cfg.walk_length)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> TransitionMatrix {
        TransitionMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn deterministic_chain() {
        let corpus = generate_walks(&two_cycle(), &WalkConfig::new(1, 4, 0).unwrap());
        assert_eq!(corpus.walks[0], vec![0, 1, 0, 1]);
        assert_eq!(corpus.walks[1], vec![1, 0, 1, 0]);
    }

    #[test]
    fn dead_end_start() {
        let t = TransitionMatrix::from_dense(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let corpus = generate_walks(&t, &WalkConfig::new(2, 5, 0).unwrap());
        assert_eq!(corpus.walks[0], vec![0]);
        assert_eq!(corpus.walks[1], vec![1, 0]);
        assert_eq!(corpus.truncated(5), 4);
    }

    #[test]
    fn walk_count_and_order() {
        let n = 100;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut r = vec![0.0; n];
                r[(i + 1) % n] = 0.5;
                r[(i + 7) % n] = 0.5;
                r
            })
            .collect();
        let t = TransitionMatrix::from_dense(&rows).unwrap();
        let corpus = generate_walks(&t, &WalkConfig::new(10, 6, 1).unwrap());
        assert_eq!(corpus.len(), 1000);
        for (k, walk) in corpus.walks.iter().enumerate() {
            assert_eq!(walk[0], k % n);
            assert!(walk.windows(2).all(|p| t.get(p[0], p[1]) > 0.0));
        }
    }

    #[test]
    fn config_validation() {
        assert!(WalkConfig::new(0, 10, 0).is_err());
        assert!(WalkConfig::new(1, 0, 0).is_err());
    }

    #[test]
    fn cache_builds_lazily() {
        let t = TransitionMatrix::from_dense(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]])
            .unwrap();
        let cache = AliasCache::new(&t);
        assert_eq!(cache.built(), 0);
        walk_from(&cache, 0, 3, 1, 0);
        assert_eq!(cache.built(), 2);
    }

    #[test]
    fn corpus_text_uses_external_ids() {
        let nodes: NodeIndex = ["x", "y"].into_iter().collect();
        let corpus = WalkCorpus::new(vec![vec![0, 1, 0], vec![1]], 2).unwrap();
        assert_eq!(corpus.to_text(&nodes), "x y x\ny\n");
    }
}
