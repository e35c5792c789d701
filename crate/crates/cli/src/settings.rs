//! Resolved run settings, config files and run manifests.
//!
//! A config file is TOML with a `[config]` table whose keys match
//! [`Settings`]. A run manifest has the same table plus provenance, so it
//! can be passed back as a config file to repeat a run.

use std::collections::BTreeMap;
use std::path::Path;

use abrw::{EmbedConfig, FusionConfig, Method, TrainConfig, WalkConfig};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::{GraphArgs, HyperArgs};

pub const THREADS_ENV: &str = "ABRW_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub method: String,
    pub edges: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attributes: Option<String>,
    pub directed: bool,
    pub weighted: bool,
    pub dim: usize,
    pub walks: usize,
    pub length: usize,
    pub window: usize,
    pub topk: usize,
    pub alpha: f64,
    pub negatives: usize,
    pub epochs: usize,
    pub lr_initial: f64,
    pub lr_final: f64,
    pub ns_exponent: f64,
    pub seed: u64,
    pub threads: usize,
    pub deterministic: bool,
}

/// `[config]` table with every key optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialSettings {
    pub method: Option<String>,
    pub edges: Option<String>,
    pub attributes: Option<String>,
    pub directed: Option<bool>,
    pub weighted: Option<bool>,
    pub dim: Option<usize>,
    pub walks: Option<usize>,
    pub length: Option<usize>,
    pub window: Option<usize>,
    pub topk: Option<usize>,
    pub alpha: Option<f64>,
    pub negatives: Option<usize>,
    pub epochs: Option<usize>,
    pub lr_initial: Option<f64>,
    pub lr_final: Option<f64>,
    pub ns_exponent: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub deterministic: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
pub struct ConfigFile {
    #[serde(default)]
    pub config: PartialSettings,
    /// Present when the file is a run manifest.
    #[serde(default)]
    pub digests: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config file {}", path.display()))
    }
}

fn default_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => bail!("{THREADS_ENV} must be a positive integer, got `{v}`"),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

impl Settings {
    /// Flags override the config file, which overrides the defaults.
    pub fn resolve(method: Option<&str>, graph: &GraphArgs, hyper: &HyperArgs, file: &PartialSettings) -> Result<Self> {
        let walk = WalkConfig::default();
        let train = TrainConfig::default();
        let fusion = FusionConfig::default();
        let path = |p: &Option<std::path::PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let edges = path(&graph.edges)
            .or_else(|| file.edges.clone())
            .context("no edge list given (use --edges or set `edges` in the config file)")?;
        let explicit_threads = hyper.threads.or(file.threads);
        let deterministic = if hyper.deterministic {
            true
        } else {
            file.deterministic.unwrap_or(explicit_threads.is_none())
        };
        let s = Settings {
            method: method.map(str::to_string).or_else(|| file.method.clone()).unwrap_or_else(|| "abrw".into()),
            edges,
            attributes: path(&graph.attributes).or_else(|| file.attributes.clone()),
            directed: graph.directed || file.directed.unwrap_or(false),
            weighted: graph.weighted || file.weighted.unwrap_or(false),
            dim: hyper.dim.or(file.dim).unwrap_or(train.dim),
            walks: hyper.walks.or(file.walks).unwrap_or(walk.walks_per_node),
            length: hyper.length.or(file.length).unwrap_or(walk.walk_length),
            window: hyper.window.or(file.window).unwrap_or(train.window),
            topk: hyper.topk.or(file.topk).unwrap_or(fusion.top_k),
            alpha: hyper.alpha.or(file.alpha).unwrap_or(fusion.alpha),
            negatives: hyper.negatives.or(file.negatives).unwrap_or(train.negatives),
            epochs: hyper.epochs.or(file.epochs).unwrap_or(train.epochs),
            lr_initial: hyper.lr_initial.or(file.lr_initial).unwrap_or(train.lr_initial),
            lr_final: hyper.lr_final.or(file.lr_final).unwrap_or(train.lr_final),
            ns_exponent: hyper.ns_exponent.or(file.ns_exponent).unwrap_or(train.ns_exponent),
            seed: hyper.seed.or(file.seed).unwrap_or(0),
            threads: match explicit_threads {
                Some(n) => n,
                None => default_threads()?,
            },
            deterministic,
        };
        s.embed_config()?;
        Ok(s)
    }

    pub fn method(&self) -> Result<Method> {
        Ok(self.method.parse()?)
    }

    /// Validated library configuration.
    pub fn embed_config(&self) -> Result<EmbedConfig> {
        if self.threads == 0 {
            bail!("threads must be at least 1");
        }
        let train = TrainConfig {
            dim: self.dim,
            window: self.window,
            negatives: self.negatives,
            ns_exponent: self.ns_exponent,
            epochs: self.epochs,
            lr_initial: self.lr_initial,
            lr_final: self.lr_final,
            seed: self.seed,
            deterministic: self.deterministic,
            threads: self.threads,
        };
        train.validate()?;
        Ok(EmbedConfig {
            method: self.method()?,
            fusion: FusionConfig::new(self.alpha, self.topk)?,
            walk: WalkConfig::new(self.walks, self.length, self.seed)?,
            train,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Settings,
    /// `sha256:<hex>` of each input and output file, keyed by role.
    #[serde(default)]
    pub digests: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, config: Settings) -> Self {
        RunManifest {
            tool: "abrw".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            digests: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(format!("# abrw run manifest\n{}", toml::to_string(self)?))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}
