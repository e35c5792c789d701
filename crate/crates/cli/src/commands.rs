use std::path::{Path, PathBuf};

use abrw::eval::{
    coordinates_to_text, link_prediction_auc, node_classification, pca_2d, rows_to_csv, run_sensitivity_sweep,
    sweep_rows, MetricRow, SweepConfig,
};
use abrw::graph::{
    load_attributes, load_labels, load_samples, read_edge_list, remove_links, sample_negative_edges,
    write_edge_list, write_links, write_samples,
};
use abrw::{embed, load_embedding, AttributedGraph, Method};
use anyhow::{Context, Result};

use crate::args::{EmbedArgs, EvalTask, PerturbArgs, SweepArgs};
use crate::output::OutputSet;
use crate::settings::{sha256_hex, ConfigFile, RunManifest, Settings};

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            let mut out = OutputSet::new();
            out.stage(p, text.as_bytes())?;
            out.commit()
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn perturb(args: &PerturbArgs) -> Result<()> {
    let list = read_edge_list(&args.edges, args.directed, args.weighted)?;
    let graph = list.graph;
    let (reduced, removed) = remove_links(&graph, args.remove_links, args.seed)?;
    log::info!(
        "removed {} of {} links, {} remain",
        removed.len(),
        graph.num_links(),
        reduced.num_links()
    );
    let weighted = graph.links().iter().any(|l| l.weight != 1.0);
    let mut out = OutputSet::new();
    out.stage(&args.output, write_edge_list(&reduced).as_bytes())?;
    out.stage(&args.removed, write_links(graph.nodes(), &removed, weighted).as_bytes())?;
    if let Some(path) = &args.samples {
        let mut samples: Vec<_> = removed.iter().map(|l| l.as_positive()).collect();
        samples.extend(sample_negative_edges(&graph, removed.len(), args.seed)?);
        out.stage(path, write_samples(graph.nodes(), &samples).as_bytes())?;
    }
    out.commit()
}

/// Loads the graph described by `settings`, with attributes only when
/// `with_attributes` is set.
fn load_graph(settings: &Settings, with_attributes: bool) -> Result<AttributedGraph> {
    let graph = read_edge_list(&settings.edges, settings.directed, settings.weighted)?.graph;
    match (&settings.attributes, with_attributes) {
        (Some(path), true) => Ok(load_attributes(graph, path)?),
        _ => Ok(graph),
    }
}

fn configure_threads(threads: usize) {
    if rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
        log::debug!("thread pool already initialised");
    }
}

fn check_digests(file: &ConfigFile, settings: &Settings) -> Result<()> {
    let inputs = [("edges", Some(&settings.edges)), ("attributes", settings.attributes.as_ref())];
    for (role, path) in inputs {
        if let (Some(expected), Some(path)) = (file.digests.get(role), path) {
            let actual = sha256_hex(&read_bytes(Path::new(path))?);
            if &actual != expected {
                log::warn!("{role} file {path} differs from the one recorded in the manifest");
            }
        }
    }
    Ok(())
}

pub fn embed_command(args: &EmbedArgs) -> Result<()> {
    let file = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let mut settings = Settings::resolve(args.method.as_deref(), &args.graph, &args.hyper, &file.config)?;
    check_digests(&file, &settings)?;
    let method = settings.method()?;
    if method.needs_attributes() && settings.attributes.is_none() {
        anyhow::bail!("method {method} needs an attribute file (--attributes)");
    }
    if method == Method::DeepWalk && settings.attributes.is_some() {
        log::warn!("deepwalk uses structure only; ignoring the attribute file");
        settings.attributes = None;
    }
    let cfg = settings.embed_config()?;
    configure_threads(settings.threads);

    let graph = load_graph(&settings, method.needs_attributes())?;
    log::info!(
        "{} nodes, {} links, {} attributes; method {method}",
        graph.num_nodes(),
        graph.num_links(),
        graph.attribute_dim()
    );
    let z = embed(&graph, &cfg)?;
    let text = z.to_text(graph.nodes());

    let mut manifest = RunManifest::new("embed", settings.clone());
    manifest.digests.insert("edges".into(), sha256_hex(&read_bytes(Path::new(&settings.edges))?));
    if let Some(a) = &settings.attributes {
        manifest.digests.insert("attributes".into(), sha256_hex(&read_bytes(Path::new(a))?));
    }
    manifest.digests.insert("output".into(), sha256_hex(text.as_bytes()));
    let manifest_path = args.manifest.clone().unwrap_or_else(|| {
        let mut p = args.output.clone().into_os_string();
        p.push(".manifest.toml");
        PathBuf::from(p)
    });
    let mut out = OutputSet::new();
    out.stage(&args.output, text.as_bytes())?;
    out.stage(&manifest_path, manifest.to_toml()?.as_bytes())?;
    out.commit()
}

pub fn eval_command(task: &EvalTask) -> Result<()> {
    match task {
        EvalTask::Lp {
            embedding,
            samples,
            output,
        } => {
            let (nodes, z) = load_embedding(embedding)?;
            let samples = load_samples(&nodes, samples)?;
            let r = link_prediction_auc(&z, &samples)?;
            log::info!("{} positives, {} negatives", r.num_positives, r.num_negatives);
            let rows = [MetricRow::new("lp", "-", "auc", r.auc)];
            emit(output.as_deref(), &rows_to_csv(&rows, false))
        }
        EvalTask::Nc {
            embedding,
            labels,
            train_fraction,
            seeds,
            seed,
            output,
        } => {
            let (nodes, z) = load_embedding(embedding)?;
            let labels = load_labels(&nodes, labels)?;
            let setting = format!("nc;train={train_fraction}");
            let mut rows = Vec::with_capacity(*seeds);
            for s in (0..*seeds as u64).map(|i| seed + i) {
                let r = node_classification(&z, &labels, *train_fraction, s)?;
                rows.push(MetricRow::new(setting.clone(), s.to_string(), "micro_f1", r.micro_f1));
            }
            emit(output.as_deref(), &rows_to_csv(&rows, true))
        }
        EvalTask::Viz {
            embedding,
            labels,
            output,
        } => {
            let (nodes, z) = load_embedding(embedding)?;
            let labels = labels.as_ref().map(|p| load_labels(&nodes, p)).transpose()?;
            let pca = pca_2d(&z)?;
            log::info!(
                "explained variance {:.4} and {:.4} of {:.4}",
                pca.explained_variance[0],
                pca.explained_variance[1],
                pca.total_variance
            );
            emit(output.as_deref(), &coordinates_to_text(&nodes, &pca, labels.as_ref()))
        }
        EvalTask::Sweep(args) => sweep(args),
    }
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let file = match &args.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let settings = Settings::resolve(Some("abrw"), &args.graph, &args.hyper, &file.config)?;
    if settings.attributes.is_none() {
        anyhow::bail!("the sweep needs an attribute file (--attributes)");
    }
    configure_threads(settings.threads);
    let graph = load_graph(&settings, true)?;
    let cfg = SweepConfig {
        alphas: args.alphas.clone(),
        top_ks: args.topks.clone(),
        seeds: (0..args.seeds as u64).map(|i| settings.seed + i).collect(),
        test_fraction: args.test_fraction,
        preserve_fraction: args.preserve,
        base: settings.embed_config()?,
    };
    let cells = run_sensitivity_sweep(&graph, &cfg)?;
    emit(args.output.as_deref(), &rows_to_csv(&sweep_rows(&cells), true))
}
