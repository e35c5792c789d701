use abrw::graph::{parse_attributes, parse_edge_list, write_attributes, write_edge_list};
use abrw::{parse_embedding, AttributedGraph, EmbeddingMatrix, Link, NodeIndex};
use proptest::prelude::*;

prop_compose! {
    fn graph()(n in 2usize..25)
        (picks in prop::collection::vec((0..n, 0..n, prop::sample::select(vec![1.0, 1.0, 0.5, 2.25])), 0..60),
         weighted in any::<bool>(), n in Just(n))
        -> (AttributedGraph, bool)
    {
        let nodes: NodeIndex = (0..n).map(|i| format!("v{}", (i * 7919) % 1000)).collect();
        let mut seen = std::collections::HashSet::new();
        let links: Vec<Link> = picks
            .into_iter()
            .filter(|&(a, b, _)| a != b && seen.insert((a.min(b), a.max(b))))
            .map(|(a, b, w)| Link::new(a, b, if weighted { w } else { 1.0 }))
            .collect();
        (AttributedGraph::from_links(nodes, links, false).unwrap(), weighted)
    }
}

proptest! {
    #[test]
    fn edge_list_roundtrip((g, weighted) in graph()) {
        let text = write_edge_list(&g);
        let back = parse_edge_list(&text, "t", false, weighted).unwrap().graph;
        prop_assert_eq!(back, g);
    }

    #[test]
    fn attribute_roundtrip(n in 1usize..12, m in 1usize..9, seed in any::<u64>()) {
        let nodes: NodeIndex = (0..n).map(|i| format!("n{i}")).collect();
        let rows = (0..n).map(|i| {
            (0..m).filter(|j| (seed >> ((i * m + j) % 64)) & 3 == 0)
                .map(|j| (j, (i + j) as f64 * 0.25 + 0.125))
                .collect::<Vec<_>>()
        });
        let a = abrw::CsrMatrix::from_rows(m, rows).unwrap();
        let text = write_attributes(&nodes, &a);
        prop_assert_eq!(parse_attributes(&text, "t", &nodes).unwrap(), a);
    }

    #[test]
    fn embedding_roundtrip(n in 1usize..10, d in 1usize..6, vals in prop::collection::vec(-1e6f64..1e6, 60)) {
        let nodes: NodeIndex = (0..n).map(|i| format!("x{i}")).collect();
        let data: Vec<f64> = (0..n * d).map(|i| vals[i % vals.len()] / (i + 1) as f64).collect();
        let z = EmbeddingMatrix::from_vec(n, d, data).unwrap();
        let (ids, back) = parse_embedding(&z.to_text(&nodes), "t").unwrap();
        prop_assert_eq!(ids, nodes);
        prop_assert_eq!(back, z);
    }
}
