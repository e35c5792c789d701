use abrw::eval::{
    node_classification, pca_2d, run_link_prediction, run_sensitivity_sweep, score_edge, SweepConfig,
};
use abrw::{AttributedGraph, CsrMatrix, EmbedConfig, EmbeddingMatrix, LabelSet, Link, Method, NodeIndex};
use approx::assert_relative_eq;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize) -> EmbeddingMatrix {
    let data = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    EmbeddingMatrix::from_vec(n, d, data).unwrap()
}

#[test]
fn score_edge_is_plain_cosine() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let z = random_matrix(&mut rng, 20, 8);
    for i in 0..20 {
        for j in 0..20 {
            let (a, b) = (z.row(i), z.row(j));
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert_relative_eq!(score_edge(&z, i, j), dot / (na * nb), max_relative = 1e-12);
        }
    }
}

#[test]
fn random_labels_score_near_chance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 400;
    let mut scores = Vec::new();
    for seed in 0..10 {
        let z = random_matrix(&mut rng, n, 16);
        let mut labels = LabelSet::new();
        for i in 0..n {
            labels.insert(i, if rng.random_bool(0.5) { "a" } else { "b" });
        }
        scores.push(node_classification(&z, &labels, 0.5, seed).unwrap().micro_f1);
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    assert!((mean - 0.5).abs() <= 0.1, "mean micro-F1 {mean} over {scores:?}");
}

#[test]
fn pca_keeps_distances_within_a_plane() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (n, d) = (60, 10);
    // orthonormal pair spanning a random plane, plus an offset
    let raw = DMatrix::from_fn(d, 2, |_, _| rng.random_range(-1.0..1.0));
    let basis = raw.qr().q();
    let offset: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
    let plane: Vec<[f64; 2]> = (0..n).map(|_| [rng.random_range(-3.0..3.0), rng.random_range(-1.0..1.0)]).collect();
    let rows: Vec<Vec<f64>> = plane
        .iter()
        .map(|p| (0..d).map(|k| offset[k] + basis[(k, 0)] * p[0] + basis[(k, 1)] * p[1]).collect())
        .collect();
    let pca = pca_2d(&EmbeddingMatrix::from_rows(&rows).unwrap()).unwrap();
    let dist = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    for i in 0..n {
        for j in 0..n {
            assert!((dist(pca.coords[i], pca.coords[j]) - dist(plane[i], plane[j])).abs() < 1e-9);
        }
    }
    assert_relative_eq!(pca.explained_variance.iter().sum::<f64>(), pca.total_variance, max_relative = 1e-9);
}

#[test]
fn pca_variance_matches_singular_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (n, d) = (100, 128);
    let z = random_matrix(&mut rng, n, d);
    let pca = pca_2d(&z).unwrap();
    let x = DMatrix::from_row_slice(n, d, z.as_slice());
    let mean = x.row_mean();
    let centered = DMatrix::from_fn(n, d, |i, j| x[(i, j)] - mean[j]);
    let mut sv: Vec<f64> = centered.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let var: Vec<f64> = sv.iter().map(|s| s * s / (n as f64 - 1.0)).collect();
    assert!((pca.explained_variance[0] - var[0]).abs() < 1e-6);
    assert!((pca.explained_variance[1] - var[1]).abs() < 1e-6);
    assert!((pca.total_variance - var.iter().sum::<f64>()).abs() < 1e-6);
}

/// Ring with chords, so every node keeps a link after a 10% holdout.
fn chorded_ring(n: usize) -> AttributedGraph {
    let nodes: NodeIndex = (0..n).map(|i| format!("v{i}")).collect();
    let mut links = Vec::new();
    for i in 0..n {
        links.push(Link::new(i, (i + 1) % n, 1.0));
        links.push(Link::new(i, (i + 5) % n, 1.0));
        links.push(Link::new(i, (i + 11) % n, 1.0));
    }
    let rows = (0..n).map(|i| vec![(i % 4, 1.0), (4 + i % 3, 1.0)]);
    let attrs = CsrMatrix::from_rows(7, rows).unwrap();
    AttributedGraph::from_links(nodes, links, false).unwrap().with_attributes(attrs).unwrap()
}

fn small(method: Method) -> EmbedConfig {
    let mut cfg = EmbedConfig::new(method);
    cfg.walk.walks_per_node = 3;
    cfg.walk.walk_length = 20;
    cfg.train.dim = 16;
    cfg.train.window = 4;
    cfg.train.epochs = 2;
    cfg.train.deterministic = true;
    cfg
}

#[test]
fn sweep_endpoints_match_standalone_pipelines() {
    let g = chorded_ring(60);
    let seeds = vec![0, 1];
    let mut sweep = SweepConfig::new(vec![0.0, 1.0], vec![5], seeds.clone());
    sweep.base = small(Method::Abrw);
    let cells = run_sensitivity_sweep(&g, &sweep).unwrap();
    for seed in seeds {
        let cell = |alpha: f64| cells.iter().find(|c| c.alpha == alpha && c.seed == seed).unwrap().auc;
        let deepwalk = run_link_prediction(&g, &small(Method::DeepWalk), 0.1, 1.0, seed).unwrap();
        assert_eq!(cell(1.0), deepwalk.auc);
        let mut attr_only = small(Method::Abrw);
        attr_only.fusion.alpha = 0.0;
        attr_only.fusion.top_k = 5;
        let walk_on_attributes = run_link_prediction(&g, &attr_only, 0.1, 1.0, seed).unwrap();
        assert_eq!(cell(0.0), walk_on_attributes.auc);
    }
}
