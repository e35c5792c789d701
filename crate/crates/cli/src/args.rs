use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "abrw", version, about = "Attributed biased random walk embeddings for incomplete graphs")]
pub struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Remove a random fraction of links from an edge list.
    Perturb(PerturbArgs),
    /// Learn node embeddings.
    Embed(EmbedArgs),
    /// Evaluate embeddings.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub directed: bool,
    #[arg(long)]
    pub weighted: bool,
    /// Fraction of links to remove, in [0, 1].
    #[arg(long, value_name = "FRAC", value_parser = closed_fraction)]
    pub remove_links: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reduced edge list.
    #[arg(long)]
    pub output: PathBuf,
    /// Removed links, one per line.
    #[arg(long)]
    pub removed: PathBuf,
    /// Also write the removed links as positives plus as many sampled
    /// non-links, for `eval lp`.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

/// Graph inputs; unset values fall back to the config file.
#[derive(Debug, Args, Default, Clone)]
pub struct GraphArgs {
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub attributes: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    #[arg(long)]
    pub weighted: bool,
}

/// Hyperparameters; unset values fall back to the config file, then to the
/// built-in defaults.
#[derive(Debug, Args, Default, Clone)]
pub struct HyperArgs {
    #[arg(long, value_parser = positive)]
    pub dim: Option<usize>,
    /// Walks per node.
    #[arg(long, value_parser = positive)]
    pub walks: Option<usize>,
    /// Nodes per walk, including the start.
    #[arg(long, value_parser = positive)]
    pub length: Option<usize>,
    #[arg(long, value_parser = at_least_two)]
    pub window: Option<usize>,
    #[arg(long, value_parser = positive)]
    pub topk: Option<usize>,
    /// Weight of the structural transition, in [0, 1].
    #[arg(long, value_parser = closed_fraction)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub negatives: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr_initial: Option<f64>,
    #[arg(long)]
    pub lr_final: Option<f64>,
    #[arg(long)]
    pub ns_exponent: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; selects lock-free parallel training unless
    /// --deterministic is also given. Defaults to ABRW_THREADS or the
    /// number of CPUs.
    #[arg(long, value_parser = positive)]
    pub threads: Option<usize>,
    /// Single-threaded, bit-reproducible training (the default).
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long, value_parser = ["abrw", "deepwalk", "attrpure"])]
    pub method: Option<String>,
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    /// TOML file with a `[config]` table; run manifests qualify.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    /// Defaults to `<output>.manifest.toml`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(subcommand)]
    pub task: EvalTask,
}

#[derive(Debug, Subcommand)]
pub enum EvalTask {
    /// Link prediction AUC against a sample file.
    Lp {
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        samples: PathBuf,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Node classification micro-F1 over several random splits.
    Nc {
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = 0.5, value_parser = open_fraction)]
        train_fraction: f64,
        /// Number of splits.
        #[arg(long, default_value_t = 10, value_parser = positive)]
        seeds: usize,
        /// First split seed; the others follow consecutively.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// 2-D PCA coordinates as `id x y label` lines.
    Viz {
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Link prediction AUC over an alpha by top-k grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub hyper: HyperArgs,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,0.8", value_parser = closed_fraction)]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "30", value_parser = positive)]
    pub topks: Vec<usize>,
    /// Seeds per cell.
    #[arg(long, default_value_t = 5, value_parser = positive)]
    pub seeds: usize,
    /// Fraction of links held out as positives.
    #[arg(long, default_value_t = 0.1, value_parser = open_fraction)]
    pub test_fraction: f64,
    /// Fraction of the remaining links kept for embedding.
    #[arg(long, default_value_t = 1.0, value_parser = closed_fraction)]
    pub preserve: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

pub fn closed_fraction(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

pub fn open_fraction(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1)"))
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive integer")),
    }
}

fn at_least_two(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 2 => Ok(v),
        _ => Err(format!("`{s}` is not an integer of at least 2")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn range_checks() {
        assert!(closed_fraction("1.5").is_err());
        assert!(closed_fraction("-0.1").is_err());
        assert!(closed_fraction("nan").is_err());
        assert_eq!(closed_fraction("0").unwrap(), 0.0);
        assert!(open_fraction("1").is_err());
        assert!(positive("0").is_err());
        assert!(at_least_two("1").is_err());
    }

    #[test]
    fn alpha_out_of_range_is_usage_error() {
        let r = Cli::try_parse_from(["abrw", "embed", "--edges", "e", "--output", "o", "--alpha", "1.2"]);
        assert_eq!(r.unwrap_err().kind(), clap::error::ErrorKind::ValueValidation);
    }
}
