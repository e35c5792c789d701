//! Attributed biased random walk embeddings for incomplete graphs.
//!
//! Structural transitions are fused with a top-k attribute-similarity
//! transition, random walks are sampled from the fused chain, and node
//! vectors are trained with skip-gram negative sampling. DeepWalk and an
//! attribute-only spectral embedding are provided as baselines, together with
//! link prediction, node classification and PCA evaluation.

pub mod alias;
pub mod baselines;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod graph;
pub mod pipeline;
pub mod rng;
pub mod sgns;
pub mod sparse;
pub mod svd;
pub mod transition;
pub mod walker;

pub use embedding::{load_embedding, parse_embedding, EmbeddingMatrix};
pub use error::{Error, Result};
pub use graph::{AttributedGraph, EdgeSample, LabelSet, Link, NodeIndex, Polarity};
pub use pipeline::{embed, EmbedConfig, Method};
pub use sgns::TrainConfig;
pub use sparse::CsrMatrix;
pub use transition::{FusionConfig, TransitionMatrix};
pub use walker::{WalkConfig, WalkCorpus};
