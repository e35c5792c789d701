//! Experimental protocols: link prediction under incompleteness, node
//! classification, and the α/k sensitivity grid.

use rayon::prelude::*;

use super::auc::{link_prediction_auc, LinkPredictionResult};
use super::classify::{node_classification, ClassificationResult};
use super::MetricRow;
use crate::error::{Error, Result};
use crate::graph::{remove_links, sample_negative_edges, AttributedGraph, EdgeSample, LabelSet};
use crate::pipeline::{embed, EmbedConfig, Method};
use crate::rng::{derive_seed, tags};
use crate::transition::FusionConfig;

#[derive(Debug, Clone)]
pub struct LinkPredictionSplit {
    /// Graph the embedding is learned from.
    pub train_graph: AttributedGraph,
    /// Held-out links followed by an equal number of non-links.
    pub samples: Vec<EdgeSample>,
}

/// Holds out `test_fraction` of the links as positives, pairs them with as
/// many non-links of the original graph, then keeps only
/// `preserve_fraction` of the remaining links for training.
pub fn link_prediction_split(
    graph: &AttributedGraph,
    test_fraction: f64,
    preserve_fraction: f64,
    seed: u64,
) -> Result<LinkPredictionSplit> {
    if !(0.0..=1.0).contains(&preserve_fraction) {
        return Err(Error::InvalidConfig(format!(
            "preserve fraction {preserve_fraction} outside [0, 1]"
        )));
    }
    let (remaining, held_out) = remove_links(graph, test_fraction, derive_seed(seed, tags::GROUND_TRUTH))?;
    if held_out.is_empty() {
        return Err(Error::InvalidConfig("link prediction split holds out no links".into()));
    }
    let negatives = sample_negative_edges(graph, held_out.len(), seed)?;
    let (train_graph, _) = remove_links(&remaining, 1.0 - preserve_fraction, derive_seed(seed, tags::PRESERVE))?;
    let mut samples: Vec<EdgeSample> = held_out.iter().map(|l| l.as_positive()).collect();
    samples.extend(negatives);
    Ok(LinkPredictionSplit { train_graph, samples })
}

pub fn run_link_prediction(
    graph: &AttributedGraph,
    cfg: &EmbedConfig,
    test_fraction: f64,
    preserve_fraction: f64,
    seed: u64,
) -> Result<LinkPredictionResult> {
    let split = link_prediction_split(graph, test_fraction, preserve_fraction, seed)?;
    let z = embed(&split.train_graph, &cfg.with_seed(seed))?;
    link_prediction_auc(&z, &split.samples)
}

/// Embeds the graph after keeping `preserve_fraction` of its links, then
/// scores a seeded classification split.
pub fn run_node_classification(
    graph: &AttributedGraph,
    labels: &LabelSet,
    cfg: &EmbedConfig,
    preserve_fraction: f64,
    train_fraction: f64,
    seed: u64,
) -> Result<ClassificationResult> {
    let (train_graph, _) = remove_links(graph, 1.0 - preserve_fraction, derive_seed(seed, tags::PRESERVE))?;
    let z = embed(&train_graph, &cfg.with_seed(seed))?;
    node_classification(&z, labels, train_fraction, seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub top_ks: Vec<usize>,
    pub seeds: Vec<u64>,
    pub test_fraction: f64,
    pub preserve_fraction: f64,
    /// Walk and training settings; method and fusion are overridden per cell.
    pub base: EmbedConfig,
}

impl SweepConfig {
    pub fn new(alphas: Vec<f64>, top_ks: Vec<usize>, seeds: Vec<u64>) -> Self {
        SweepConfig {
            alphas,
            top_ks,
            seeds,
            test_fraction: 0.1,
            preserve_fraction: 1.0,
            base: EmbedConfig::new(Method::Abrw),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub alpha: f64,
    pub top_k: usize,
    pub seed: u64,
    pub auc: f64,
}

impl SweepCell {
    pub fn setting(&self) -> String {
        format!("alpha={};k={}", self.alpha, self.top_k)
    }
}

/// Link prediction AUC of ABRW over every `(α, k, seed)` combination. All
/// cells sharing a seed share the same split.
pub fn run_sensitivity_sweep(graph: &AttributedGraph, cfg: &SweepConfig) -> Result<Vec<SweepCell>> {
    let mut fusions = Vec::new();
    for &alpha in &cfg.alphas {
        for &top_k in &cfg.top_ks {
            fusions.push(FusionConfig::new(alpha, top_k)?);
        }
    }
    let splits: Vec<(u64, LinkPredictionSplit)> = cfg
        .seeds
        .iter()
        .map(|&s| Ok((s, link_prediction_split(graph, cfg.test_fraction, cfg.preserve_fraction, s)?)))
        .collect::<Result<_>>()?;
    let jobs: Vec<(FusionConfig, &(u64, LinkPredictionSplit))> =
        fusions.iter().flat_map(|f| splits.iter().map(move |s| (*f, s))).collect();
    jobs.into_par_iter()
        .map(|(fusion, (seed, split))| {
            let mut embed_cfg = cfg.base.with_seed(*seed);
            embed_cfg.method = Method::Abrw;
            embed_cfg.fusion = fusion;
            let z = embed(&split.train_graph, &embed_cfg)?;
            let r = link_prediction_auc(&z, &split.samples)?;
            Ok(SweepCell {
                alpha: fusion.alpha,
                top_k: fusion.top_k,
                seed: *seed,
                auc: r.auc,
            })
        })
        .collect()
}

pub fn sweep_rows(cells: &[SweepCell]) -> Vec<MetricRow> {
    cells
        .iter()
        .map(|c| MetricRow::new(c.setting(), c.seed.to_string(), "auc", c.auc))
        .collect()
}
