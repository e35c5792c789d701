//! Node embedding matrix and its word-vector text layout.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::NodeIndex;

/// Dense `n x d` matrix, one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    n: usize,
    dim: usize,
    data: Vec<f64>,
}

impl EmbeddingMatrix {
    pub fn zeros(n: usize, dim: usize) -> Self {
        EmbeddingMatrix {
            n,
            dim,
            data: vec![0.0; n * dim],
        }
    }

    pub fn from_vec(n: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {n}x{dim} embedding",
                data.len()
            )));
        }
        Ok(EmbeddingMatrix { n, dim, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("ragged embedding rows".into()));
        }
        Ok(EmbeddingMatrix {
            n: rows.len(),
            dim,
            data: rows.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Header `n d`, then `id f1 ... fd` per node.
    pub fn to_text(&self, nodes: &NodeIndex) -> String {
        assert_eq!(nodes.len(), self.n, "node index does not match embedding rows");
        let mut out = format!("{} {}\n", self.n, self.dim);
        for i in 0..self.n {
            out.push_str(nodes.id(i));
            for v in self.row(i) {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, nodes: &NodeIndex, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text(nodes)).map_err(|e| Error::io(path, e))
    }
}

/// Parses the text layout written by [`EmbeddingMatrix::to_text`].
pub fn parse_embedding(text: &str, source: &str) -> Result<(NodeIndex, EmbeddingMatrix)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(source, 1, "missing `n d` header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let parse_usize = |tok: &str| tok.parse::<usize>().ok();
    let (n, dim) = match head.as_slice() {
        [a, b] => match (parse_usize(a), parse_usize(b)) {
            (Some(n), Some(d)) => (n, d),
            _ => return Err(Error::parse(source, hline + 1, "header must be `n d`")),
        },
        _ => return Err(Error::parse(source, hline + 1, "header must be `n d`")),
    };
    let mut nodes = NodeIndex::new();
    // cap the reservation; the header is untrusted
    let mut data = Vec::with_capacity(n.saturating_mul(dim).min(1 << 20));
    for (i, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != dim + 1 {
            return Err(Error::parse(
                source,
                i + 1,
                format!("expected an id and {dim} values, found {} fields", tokens.len()),
            ));
        }
        if nodes.index_of(tokens[0]).is_some() {
            return Err(Error::parse(source, i + 1, format!("duplicate id `{}`", tokens[0])));
        }
        if nodes.len() == n {
            return Err(Error::parse(source, i + 1, format!("more than {n} rows")));
        }
        nodes.intern(tokens[0]);
        for tok in &tokens[1..] {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::parse(source, i + 1, format!("`{tok}` is not a number")))?;
            if !v.is_finite() {
                return Err(Error::parse(source, i + 1, format!("`{tok}` is not finite")));
            }
            data.push(v);
        }
    }
    if nodes.len() != n {
        return Err(Error::parse(
            source,
            text.lines().count(),
            format!("header promises {n} rows, found {}", nodes.len()),
        ));
    }
    Ok((nodes, EmbeddingMatrix { n, dim, data }))
}

pub fn load_embedding(path: impl AsRef<Path>) -> Result<(NodeIndex, EmbeddingMatrix)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_embedding(&text, &path.display().to_string())
}
