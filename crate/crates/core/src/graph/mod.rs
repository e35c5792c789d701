//! Attributed network data model: node identifiers, weighted links,
//! attribute rows and labels.

mod io;
mod perturb;

use std::collections::{BTreeMap, HashSet};

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

pub use io::{
    dataset_shape, load_attributes, load_edge_list, load_labels, load_samples, parse_attributes,
    parse_edge_list, parse_labels, parse_samples, read_edge_list, write_attributes, write_edge_list,
    write_links, write_samples, DatasetShape, EdgeList, EdgeListSummary,
};
pub use perturb::{remove_links, sample_negative_edges};

/// External string identifiers mapped to dense indices in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeIndex {
    ids: IndexSet<String>,
}

impl NodeIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the index of `id`, inserting it if unseen.
    pub fn intern(&mut self, id: &str) -> usize {
        match self.ids.get_index_of(id) {
            Some(i) => i,
            None => self.ids.insert_full(id.to_string()).0,
        }
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.get_index_of(id)
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(String::as_str)
    }
}

impl<S: AsRef<str>> FromIterator<S> for NodeIndex {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        let mut index = NodeIndex::new();
        for id in iter {
            index.intern(id.as_ref());
        }
        index
    }
}

/// One stored link. Undirected graphs keep each link once, in the
/// orientation it was first seen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl Link {
    pub fn new(src: usize, dst: usize, weight: f64) -> Self {
        Link { src, dst, weight }
    }

    pub fn as_positive(&self) -> EdgeSample {
        EdgeSample {
            src: self.src,
            dst: self.dst,
            polarity: Polarity::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// A true link held out of the graph.
    Positive,
    /// A sampled node pair with no link.
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "pos",
            Polarity::Negative => "neg",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeSample {
    pub src: usize,
    pub dst: usize,
    pub polarity: Polarity,
}

/// Weighted adjacency plus per-node attributes over a shared node index.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    nodes: NodeIndex,
    links: Vec<Link>,
    adjacency: CsrMatrix,
    attributes: CsrMatrix,
    directed: bool,
}

pub(crate) fn link_key(src: usize, dst: usize, directed: bool) -> (usize, usize) {
    if directed || src <= dst {
        (src, dst)
    } else {
        (dst, src)
    }
}

impl AttributedGraph {
    /// Builds a graph with no attributes (an `n x 0` attribute matrix).
    pub fn from_links(nodes: NodeIndex, links: Vec<Link>, directed: bool) -> Result<Self> {
        let n = nodes.len();
        let mut seen = HashSet::with_capacity(links.len());
        let mut triplets = Vec::with_capacity(links.len() * 2);
        for link in &links {
            if link.src >= n || link.dst >= n {
                return Err(Error::DimensionMismatch(format!(
                    "link ({}, {}) references a node outside 0..{n}",
                    link.src, link.dst
                )));
            }
            if link.src == link.dst {
                return Err(Error::InvalidConfig(format!(
                    "self-loop on node `{}`",
                    nodes.id(link.src)
                )));
            }
            if !link.weight.is_finite() || link.weight < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "link weight {} must be finite and nonnegative",
                    link.weight
                )));
            }
            if !seen.insert(link_key(link.src, link.dst, directed)) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate link ({}, {})",
                    nodes.id(link.src),
                    nodes.id(link.dst)
                )));
            }
            triplets.push((link.src, link.dst, link.weight));
            if !directed {
                triplets.push((link.dst, link.src, link.weight));
            }
        }
        // zero-weight links stay in `links` but carry no walk mass
        let adjacency = CsrMatrix::from_triplets(n, n, &triplets)?;
        Ok(AttributedGraph {
            nodes,
            links,
            adjacency,
            attributes: CsrMatrix::zeros(n, 0),
            directed,
        })
    }

    pub fn with_attributes(mut self, attributes: CsrMatrix) -> Result<Self> {
        if attributes.n_rows() != self.nodes.len() {
            return Err(Error::DimensionMismatch(format!(
                "attribute matrix has {} rows for {} nodes",
                attributes.n_rows(),
                self.nodes.len()
            )));
        }
        if attributes.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("attributes must be finite".into()));
        }
        self.attributes = attributes;
        Ok(self)
    }

    /// Same nodes and attributes with a different link set.
    pub fn with_links(&self, links: Vec<Link>) -> Result<Self> {
        let g = AttributedGraph::from_links(self.nodes.clone(), links, self.directed)?;
        g.with_attributes(self.attributes.clone())
    }

    /// Appends `extra` links after the existing ones.
    pub fn with_added_links(&self, extra: &[Link]) -> Result<Self> {
        let mut links = self.links.clone();
        links.extend_from_slice(extra);
        self.with_links(links)
    }

    pub fn nodes(&self) -> &NodeIndex {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    pub fn attributes(&self) -> &CsrMatrix {
        &self.attributes
    }

    pub fn attribute_dim(&self) -> usize {
        self.attributes.n_cols()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// True if a link (in either direction, for undirected graphs) exists.
    pub fn has_link(&self, src: usize, dst: usize) -> bool {
        self.adjacency.row(src).indices.binary_search(&dst).is_ok()
            || (!self.directed && self.adjacency.row(dst).indices.binary_search(&src).is_ok())
    }
}

/// Partial map from node index to class label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    labels: BTreeMap<usize, String>,
}

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, node: usize, label: impl Into<String>) {
        self.labels.insert(node, label.into());
    }

    pub fn get(&self, node: usize) -> Option<&str> {
        self.labels.get(&node).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str)> {
        self.labels.iter().map(|(&n, l)| (n, l.as_str()))
    }

    /// Distinct labels in sorted order.
    pub fn classes(&self) -> Vec<String> {
        let mut classes: Vec<String> = self.labels.values().cloned().collect();
        classes.sort();
        classes.dedup();
        classes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(directed: bool) -> AttributedGraph {
        let nodes: NodeIndex = ["a", "b", "c"].into_iter().collect();
        AttributedGraph::from_links(nodes, vec![Link::new(0, 1, 1.0), Link::new(1, 2, 2.0)], directed)
            .unwrap()
    }

    #[test]
    fn undirected_links_are_symmetrized() {
        let g = path_graph(false);
        assert_eq!(g.adjacency().nnz(), 4);
        assert_eq!(g.adjacency().get(2, 1), 2.0);
        assert!(g.has_link(2, 1));
        assert!(!g.has_link(0, 2));
    }

    #[test]
    fn directed_links_are_not() {
        let g = path_graph(true);
        assert_eq!(g.adjacency().nnz(), 2);
        assert!(g.has_link(0, 1));
        assert!(!g.has_link(1, 0));
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let nodes: NodeIndex = ["a", "b"].into_iter().collect();
        assert!(AttributedGraph::from_links(nodes.clone(), vec![Link::new(0, 0, 1.0)], false).is_err());
        let dup = vec![Link::new(0, 1, 1.0), Link::new(1, 0, 1.0)];
        assert!(AttributedGraph::from_links(nodes.clone(), dup.clone(), false).is_err());
        assert!(AttributedGraph::from_links(nodes, dup, true).is_ok());
    }

    #[test]
    fn attribute_rows_must_match() {
        let g = path_graph(false);
        assert!(g.clone().with_attributes(CsrMatrix::zeros(2, 4)).is_err());
        let g = g.with_attributes(CsrMatrix::zeros(3, 4)).unwrap();
        assert_eq!(g.attribute_dim(), 4);
    }

    #[test]
    fn label_classes_are_sorted_and_distinct() {
        let mut labels = LabelSet::new();
        labels.insert(2, "y");
        labels.insert(0, "x");
        labels.insert(1, "y");
        labels.insert(1, "x");
        assert_eq!(labels.classes(), vec!["x", "y"]);
        assert_eq!(labels.get(1), Some("x"));
    }
}
