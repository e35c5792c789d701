//! End-to-end embedding of an attributed graph by any supported method.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{attrpure_embed, deepwalk_embed};
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::AttributedGraph;
use crate::sgns::{embed_corpus, TrainConfig};
use crate::transition::{build_attribute_transition, build_biased_transition, row_normalize, FusionConfig, TransitionMatrix};
use crate::walker::{generate_walks, WalkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Abrw,
    DeepWalk,
    AttrPure,
}

impl Method {
    pub fn needs_attributes(self) -> bool {
        matches!(self, Method::Abrw | Method::AttrPure)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Abrw => "abrw",
            Method::DeepWalk => "deepwalk",
            Method::AttrPure => "attrpure",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "abrw" => Ok(Method::Abrw),
            "deepwalk" => Ok(Method::DeepWalk),
            "attrpure" => Ok(Method::AttrPure),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedConfig {
    pub method: Method,
    pub fusion: FusionConfig,
    pub walk: WalkConfig,
    pub train: TrainConfig,
}

impl EmbedConfig {
    pub fn new(method: Method) -> Self {
        EmbedConfig {
            method,
            fusion: FusionConfig::default(),
            walk: WalkConfig::default(),
            train: TrainConfig::default(),
        }
    }

    /// Uses `seed` for every stochastic stage.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.walk.seed = seed;
        self.train.seed = seed;
        self
    }
}

/// Structural and attribute transitions fused into the biased walk matrix.
pub fn abrw_transition(graph: &AttributedGraph, fusion: &FusionConfig) -> Result<TransitionMatrix> {
    let structural = row_normalize(graph.adjacency())?;
    let attribute = build_attribute_transition(graph.attributes(), fusion.top_k)?;
    build_biased_transition(&structural, &attribute, fusion.alpha)
}

pub fn abrw_embed(
    graph: &AttributedGraph,
    fusion: &FusionConfig,
    walk: &WalkConfig,
    train: &TrainConfig,
) -> Result<EmbeddingMatrix> {
    let transition = abrw_transition(graph, fusion)?;
    let corpus = generate_walks(&transition, walk);
    log::debug!("{}", crate::walker::describe(&corpus, walk));
    embed_corpus(&corpus, train)
}

pub fn embed(graph: &AttributedGraph, cfg: &EmbedConfig) -> Result<EmbeddingMatrix> {
    match cfg.method {
        Method::Abrw => abrw_embed(graph, &cfg.fusion, &cfg.walk, &cfg.train),
        Method::DeepWalk => deepwalk_embed(graph.adjacency(), &cfg.walk, &cfg.train),
        Method::AttrPure => attrpure_embed(graph.attributes(), cfg.train.dim, cfg.train.seed),
    }
}
