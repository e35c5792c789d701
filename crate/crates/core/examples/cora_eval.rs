//! Link prediction and node classification on the bundled Cora data for one
//! seed, with timings.
//!
//! cargo run --release --example cora_eval -p abrw -- [preserve] [seed] [methods]

use std::path::Path;
use std::time::Instant;

use abrw::eval::{run_link_prediction, run_node_classification};
use abrw::graph::{load_attributes, load_edge_list, load_labels};
use abrw::{EmbedConfig, Method};

fn main() -> abrw::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let preserve: f64 = args.first().map_or(0.9, |a| a.parse().expect("preserve fraction"));
    let seed: u64 = args.get(1).map_or(0, |a| a.parse().expect("seed"));
    let methods: Vec<Method> = match args.get(2) {
        Some(list) => list.split(',').map(str::parse).collect::<abrw::Result<_>>()?,
        None => vec![Method::Abrw, Method::DeepWalk, Method::AttrPure],
    };
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/cora");
    let graph = load_edge_list(dir.join("cora.edges"), false, false)?;
    let graph = load_attributes(graph, dir.join("cora.attrs"))?;
    let labels = load_labels(graph.nodes(), dir.join("cora.labels"))?;
    for method in methods {
        let mut cfg = EmbedConfig::new(method);
        cfg.train.deterministic = true;
        let t = Instant::now();
        let lp = run_link_prediction(&graph, &cfg, 0.1, preserve, seed)?;
        let t_lp = t.elapsed();
        let t = Instant::now();
        let nc = run_node_classification(&graph, &labels, &cfg, preserve, 0.5, seed)?;
        println!(
            "{method:9} auc={:.4} ({:.1?})  micro_f1={:.4} ({:.1?})",
            lp.auc,
            t_lp,
            nc.micro_f1,
            t.elapsed()
        );
    }
    Ok(())
}
