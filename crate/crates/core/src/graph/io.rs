//! Text formats for edge lists, attributes, labels and evaluation samples.
//!
//! All formats are UTF-8, whitespace separated, and treat everything after a
//! `#` as a comment.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{link_key, AttributedGraph, EdgeSample, LabelSet, Link, NodeIndex, Polarity};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Counts gathered while reading an edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListSummary {
    /// Link lines in the file.
    pub records: usize,
    /// Distinct ordered `(src, dst)` records.
    pub distinct_records: usize,
}

#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: AttributedGraph,
    pub summary: EdgeListSummary,
}

/// Node, link, attribute and class counts as reported by the loaders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetShape {
    pub nodes: usize,
    /// Distinct link records in the edge file.
    pub links: usize,
    /// Distinct links after symmetrization (undirected graphs).
    pub undirected_links: usize,
    pub attributes: usize,
    pub classes: usize,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_value(source: &str, line: usize, token: &str, what: &str) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| Error::parse(source, line, format!("{what} `{token}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(source, line, format!("{what} `{token}` is not finite")));
    }
    Ok(v)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Parses `src dst [weight]` lines. A line holding a single node id declares
/// that node without adding a link, which is how isolated nodes survive a
/// write/read cycle.
pub fn parse_edge_list(text: &str, source: &str, directed: bool, weighted: bool) -> Result<EdgeList> {
    let mut nodes = NodeIndex::new();
    let mut links: Vec<Link> = Vec::new();
    let mut position: HashMap<(usize, usize), usize> = HashMap::new();
    let mut distinct = HashSet::new();
    let mut records = 0;
    for (line, tokens) in data_lines(text) {
        match tokens.len() {
            1 => {
                nodes.intern(tokens[0]);
                continue;
            }
            2 | 3 => {}
            k => {
                return Err(Error::parse(
                    source,
                    line,
                    format!("expected `src dst [weight]`, found {k} fields"),
                ))
            }
        }
        let weight = match tokens.get(2) {
            Some(tok) => {
                let w = parse_value(source, line, tok, "weight")?;
                if w < 0.0 {
                    return Err(Error::parse(source, line, format!("negative weight {w}")));
                }
                if weighted {
                    w
                } else {
                    1.0
                }
            }
            None => 1.0,
        };
        if tokens[0] == tokens[1] {
            return Err(Error::parse(source, line, format!("self-loop on `{}`", tokens[0])));
        }
        let src = nodes.intern(tokens[0]);
        let dst = nodes.intern(tokens[1]);
        records += 1;
        distinct.insert((src, dst));
        match position.get(&link_key(src, dst, directed)) {
            Some(&pos) => links[pos].weight = weight,
            None => {
                position.insert(link_key(src, dst, directed), links.len());
                links.push(Link::new(src, dst, weight));
            }
        }
    }
    let graph = AttributedGraph::from_links(nodes, links, directed)?;
    Ok(EdgeList {
        graph,
        summary: EdgeListSummary {
            records,
            distinct_records: distinct.len(),
        },
    })
}

pub fn read_edge_list(path: impl AsRef<Path>, directed: bool, weighted: bool) -> Result<EdgeList> {
    let path = path.as_ref();
    parse_edge_list(&read_text(path)?, &path.display().to_string(), directed, weighted)
}

pub fn load_edge_list(path: impl AsRef<Path>, directed: bool, weighted: bool) -> Result<AttributedGraph> {
    read_edge_list(path, directed, weighted).map(|e| e.graph)
}

/// Serializes links in stored order. Nodes that would otherwise appear out
/// of index order (or not at all) are declared on their own line first, so
/// reading the output back reproduces the same node indices.
pub fn write_edge_list(graph: &AttributedGraph) -> String {
    let nodes = graph.nodes();
    let weighted = graph.links().iter().any(|l| l.weight != 1.0);
    // nodes 0..next have appeared in the output so far
    let mut next = 0;
    let mut out = String::new();
    for link in graph.links() {
        let mut fresh = Vec::with_capacity(2);
        for x in [link.src, link.dst] {
            if x >= next && !fresh.contains(&x) {
                fresh.push(x);
            }
        }
        let in_order = fresh.iter().enumerate().all(|(i, &x)| x == next + i);
        if !in_order {
            let last = fresh.iter().copied().max().unwrap_or(0);
            for i in next..=last {
                let _ = writeln!(out, "{}", nodes.id(i));
            }
            next = last + 1;
        } else {
            next += fresh.len();
        }
        if weighted {
            let _ = writeln!(out, "{} {} {}", nodes.id(link.src), nodes.id(link.dst), link.weight);
        } else {
            let _ = writeln!(out, "{} {}", nodes.id(link.src), nodes.id(link.dst));
        }
    }
    for i in next..nodes.len() {
        let _ = writeln!(out, "{}", nodes.id(i));
    }
    out
}

/// Writes `links` one per line, with a weight column when `weighted`.
/// Unlike [`write_edge_list`] no node declarations are emitted.
pub fn write_links(nodes: &NodeIndex, links: &[Link], weighted: bool) -> String {
    let mut out = String::new();
    for l in links {
        if weighted {
            let _ = writeln!(out, "{} {} {}", nodes.id(l.src), nodes.id(l.dst), l.weight);
        } else {
            let _ = writeln!(out, "{} {}", nodes.id(l.src), nodes.id(l.dst));
        }
    }
    out
}

/// Parses an attribute file against `nodes`.
///
/// Dense files hold `node_id v1 ... vm` with `m` fixed by the first line.
/// Sparse files start with an `@dim m` header followed by
/// `node_id idx:val ...` lines (0-based indices). Nodes without a line get an
/// all-zero row; a repeated node keeps its last line.
pub fn parse_attributes(text: &str, source: &str, nodes: &NodeIndex) -> Result<CsrMatrix> {
    let mut lines = data_lines(text).peekable();
    let sparse_dim = match lines.peek() {
        Some((line, tokens)) if tokens[0] == "@dim" => {
            if tokens.len() != 2 {
                return Err(Error::parse(source, *line, "expected `@dim <m>`"));
            }
            let m: usize = tokens[1]
                .parse()
                .map_err(|_| Error::parse(source, *line, format!("bad dimension `{}`", tokens[1])))?;
            lines.next();
            Some(m)
        }
        _ => None,
    };
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
    let mut dim = sparse_dim;
    for (line, tokens) in lines {
        let node = nodes.require(tokens[0])?;
        let mut row = Vec::new();
        match sparse_dim {
            Some(m) => {
                for tok in &tokens[1..] {
                    let (idx, val) = tok.split_once(':').ok_or_else(|| {
                        Error::parse(source, line, format!("expected `idx:val`, found `{tok}`"))
                    })?;
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::parse(source, line, format!("bad index `{idx}`")))?;
                    if idx >= m {
                        return Err(Error::parse(
                            source,
                            line,
                            format!("index {idx} out of range for dimension {m}"),
                        ));
                    }
                    row.push((idx, parse_value(source, line, val, "attribute value")?));
                }
                row.sort_by_key(|&(c, _)| c);
                if row.windows(2).any(|w| w[0].0 == w[1].0) {
                    return Err(Error::parse(source, line, "repeated attribute index"));
                }
            }
            None => {
                let width = tokens.len() - 1;
                match dim {
                    None => dim = Some(width),
                    Some(m) if m != width => {
                        return Err(Error::parse(
                            source,
                            line,
                            format!("inconsistent attribute width: expected {m}, found {width}"),
                        ))
                    }
                    _ => {}
                }
                for (c, tok) in tokens[1..].iter().enumerate() {
                    row.push((c, parse_value(source, line, tok, "attribute value")?));
                }
            }
        }
        rows[node] = row;
    }
    CsrMatrix::from_rows(dim.unwrap_or(0), rows)
}

pub fn load_attributes(graph: AttributedGraph, path: impl AsRef<Path>) -> Result<AttributedGraph> {
    let path = path.as_ref();
    let attributes = parse_attributes(&read_text(path)?, &path.display().to_string(), graph.nodes())?;
    graph.with_attributes(attributes)
}

/// Sparse attribute format; round-trips through [`parse_attributes`].
pub fn write_attributes(nodes: &NodeIndex, attributes: &CsrMatrix) -> String {
    let mut out = format!("@dim {}\n", attributes.n_cols());
    for (i, row) in attributes.rows().enumerate() {
        out.push_str(nodes.id(i));
        for (c, v) in row.iter() {
            let _ = write!(out, " {c}:{v}");
        }
        out.push('\n');
    }
    out
}

/// `node_id label` lines; the last line for a node wins.
pub fn parse_labels(text: &str, source: &str, nodes: &NodeIndex) -> Result<LabelSet> {
    let mut labels = LabelSet::new();
    for (line, tokens) in data_lines(text) {
        if tokens.len() != 2 {
            return Err(Error::parse(source, line, "expected `node_id label`"));
        }
        labels.insert(nodes.require(tokens[0])?, tokens[1]);
    }
    Ok(labels)
}

pub fn load_labels(nodes: &NodeIndex, path: impl AsRef<Path>) -> Result<LabelSet> {
    let path = path.as_ref();
    parse_labels(&read_text(path)?, &path.display().to_string(), nodes)
}

/// `src dst pos|neg` lines.
pub fn parse_samples(text: &str, source: &str, nodes: &NodeIndex) -> Result<Vec<EdgeSample>> {
    let mut samples = Vec::new();
    for (line, tokens) in data_lines(text) {
        if tokens.len() != 3 {
            return Err(Error::parse(source, line, "expected `src dst pos|neg`"));
        }
        let polarity = match tokens[2] {
            "pos" => Polarity::Positive,
            "neg" => Polarity::Negative,
            other => {
                return Err(Error::parse(source, line, format!("unknown polarity `{other}`")));
            }
        };
        samples.push(EdgeSample {
            src: nodes.require(tokens[0])?,
            dst: nodes.require(tokens[1])?,
            polarity,
        });
    }
    Ok(samples)
}

pub fn load_samples(nodes: &NodeIndex, path: impl AsRef<Path>) -> Result<Vec<EdgeSample>> {
    let path = path.as_ref();
    parse_samples(&read_text(path)?, &path.display().to_string(), nodes)
}

pub fn write_samples(nodes: &NodeIndex, samples: &[EdgeSample]) -> String {
    let mut out = String::new();
    for s in samples {
        let _ = writeln!(out, "{} {} {}", nodes.id(s.src), nodes.id(s.dst), s.polarity.as_str());
    }
    out
}

/// Loads the three files of a dataset and reports their shape.
pub fn dataset_shape(
    edges: impl AsRef<Path>,
    attributes: impl AsRef<Path>,
    labels: impl AsRef<Path>,
) -> Result<DatasetShape> {
    let EdgeList { graph, summary } = read_edge_list(edges, false, false)?;
    let graph = load_attributes(graph, attributes)?;
    let labels = load_labels(graph.nodes(), labels)?;
    Ok(DatasetShape {
        nodes: graph.num_nodes(),
        links: summary.distinct_records,
        undirected_links: graph.num_links(),
        attributes: graph.attribute_dim(),
        classes: labels.classes().len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_pair_stores_four_entries() {
        let e = parse_edge_list("a b\nb c", "t", false, false).unwrap();
        assert_eq!(e.graph.num_nodes(), 3);
        assert_eq!(e.graph.adjacency().nnz(), 4);
        assert!(e.graph.adjacency().values().iter().all(|&w| w == 1.0));
    }

    #[test]
    fn negative_weight_reports_line() {
        match parse_edge_list("a b -1", "f", false, true) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_lines_are_rejected() {
        for bad in ["a b c d", "a b x", "a b NaN", "a b inf", "a a"] {
            assert!(parse_edge_list(bad, "f", false, true).is_err(), "{bad}");
        }
        match parse_edge_list("# header\n\nx y\nx y z w\n", "f", false, true) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn repeated_edges_keep_last_weight() {
        let e = parse_edge_list("a b 1\nb a 3\na b 2 # trailing", "f", false, true).unwrap();
        assert_eq!(e.graph.num_links(), 1);
        assert_eq!(e.graph.links()[0].weight, 2.0);
        assert_eq!(e.summary.records, 3);
        assert_eq!(e.summary.distinct_records, 2);
        let d = parse_edge_list("a b 1\nb a 3", "f", true, true).unwrap();
        assert_eq!(d.graph.num_links(), 2);
    }

    #[test]
    fn unweighted_mode_ignores_weights() {
        let e = parse_edge_list("a b 4.5", "f", false, false).unwrap();
        assert_eq!(e.graph.links()[0].weight, 1.0);
    }

    #[test]
    fn write_preserves_canonical_input() {
        let text = "a b\nb c\nd a\n";
        let g = parse_edge_list(text, "f", false, false).unwrap().graph;
        assert_eq!(write_edge_list(&g), text);
    }

    #[test]
    fn isolated_nodes_survive_roundtrip() {
        let g = parse_edge_list("a b\nc d\nb e\n", "f", false, false).unwrap().graph;
        let reduced = g.with_links(vec![g.links()[2]]).unwrap();
        let text = write_edge_list(&reduced);
        let back = parse_edge_list(&text, "f", false, false).unwrap().graph;
        assert_eq!(back, reduced);
    }

    #[test]
    fn dense_and_sparse_attributes() {
        let nodes: NodeIndex = ["a", "b", "c"].into_iter().collect();
        let dense = parse_attributes("a 1 0 2\nc 0 0 1\n", "f", &nodes).unwrap();
        assert_eq!(dense.n_cols(), 3);
        assert!(dense.row(1).is_empty());
        assert_eq!(dense.row(0).to_dense(3), vec![1.0, 0.0, 2.0]);

        let sparse = parse_attributes("@dim 10\na 3:0.5 7:1.0\n", "f", &nodes).unwrap();
        assert_eq!(sparse.n_cols(), 10);
        assert_eq!(sparse.row(0).nnz(), 2);
        assert_eq!(sparse.get(0, 7), 1.0);
    }

    #[test]
    fn attribute_errors() {
        let nodes: NodeIndex = ["a", "b"].into_iter().collect();
        match parse_attributes("zz 1 2", "f", &nodes) {
            Err(Error::UnknownNode(id)) => assert_eq!(id, "zz"),
            other => panic!("{other:?}"),
        }
        assert!(parse_attributes("a 1 2\nb 1 2 3", "f", &nodes).is_err());
        assert!(parse_attributes("@dim 4\na 4:1", "f", &nodes).is_err());
        assert!(parse_attributes("@dim 4\na 1:1 1:2", "f", &nodes).is_err());
        assert!(parse_attributes("a 3:1", "f", &nodes).is_err());
    }

    #[test]
    fn labels_last_wins_and_empty_ok() {
        let nodes: NodeIndex = ["a", "b"].into_iter().collect();
        assert!(parse_labels("", "f", &nodes).unwrap().is_empty());
        let l = parse_labels("a x\nb y\na z\n", "f", &nodes).unwrap();
        assert_eq!(l.get(0), Some("z"));
        assert!(matches!(parse_labels("c x", "f", &nodes), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn samples_roundtrip() {
        let nodes: NodeIndex = ["a", "b", "c"].into_iter().collect();
        let text = "a b pos\nc a neg\n";
        let s = parse_samples(text, "f", &nodes).unwrap();
        assert_eq!(s[1].polarity, Polarity::Negative);
        assert_eq!(write_samples(&nodes, &s), text);
        assert!(parse_samples("a b maybe", "f", &nodes).is_err());
    }
}
