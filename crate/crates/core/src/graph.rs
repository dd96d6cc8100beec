//! Edge-labeled directed graphs as one Boolean adjacency matrix per label.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::boolmat::MatrixSet;
use crate::error::{Error, Result};

/// Suffix marking the inverse of a relation.
pub const INVERSE_SUFFIX: &str = "_r";

/// Name of the inverse relation of `label`.
pub fn inverse_label(label: &str) -> String {
    format!("{label}{INVERSE_SUFFIX}")
}

/// Directed graph with named vertices and labeled edges.
///
/// Vertices are numbered densely in the order they were first mentioned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    matrices: MatrixSet,
}

/// Accumulates edges before the vertex count is known.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeSet<(String, usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of `name`, registering it if new.
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), i);
        i
    }

    pub fn add_edge(&mut self, src: &str, label: &str, dst: &str) -> &mut Self {
        let (u, v) = (self.vertex(src), self.vertex(dst));
        self.edges.insert((label.to_owned(), u, v));
        self
    }

    pub fn build(self) -> LabeledGraph {
        let mut matrices = MatrixSet::new(self.names.len());
        for (label, u, v) in self.edges {
            matrices.entry(&label).set_unchecked(u, v);
        }
        LabeledGraph {
            names: self.names,
            index: self.index,
            matrices,
        }
    }
}

impl LabeledGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Graph of `(src, label, dst)` triples.
    pub fn from_edges<'a, I>(edges: I) -> LabeledGraph
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let mut b = GraphBuilder::new();
        for (s, l, d) in edges {
            b.add_edge(s, l, d);
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, index: usize) -> Option<&str> {
        self.names.get(index).map(String::as_str)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The per-label adjacency matrices.
    pub fn matrices(&self) -> &MatrixSet {
        &self.matrices
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.matrices.iter().filter(|(_, m)| !m.is_empty()).map(|(l, _)| l)
    }

    pub fn edge_count(&self) -> usize {
        self.matrices.nnz()
    }

    /// Edges as `(src, label, dst)` indices, ordered by label then coordinates.
    pub fn edges(&self) -> impl Iterator<Item = (usize, &str, usize)> {
        self.matrices
            .iter()
            .flat_map(|(l, m)| m.iter().map(move |(u, v)| (u, l, v)))
    }

    pub fn stats(&self) -> GraphStats {
        let mut per_label: Vec<(String, usize)> = self
            .matrices
            .iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(l, m)| (l.to_owned(), m.nnz()))
            .collect();
        per_label.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        GraphStats {
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            per_label,
        }
    }

    /// Serializes as triple lines. Edges are ordered so that reading the text
    /// back assigns every vertex its current index.
    pub fn save_graph(&self) -> String {
        let n = self.vertex_count();
        let mut out_edges: Vec<Vec<(usize, &str)>> = vec![Vec::new(); n];
        let mut in_edges: Vec<Vec<(usize, &str)>> = vec![Vec::new(); n];
        let all: Vec<(usize, &str, usize)> = self.edges().collect();
        for &(u, l, v) in &all {
            out_edges[u].push((v, l));
            in_edges[v].push((u, l));
        }
        let mut emitted: BTreeSet<(usize, &str, usize)> = BTreeSet::new();
        let mut order = Vec::with_capacity(all.len());
        let mut seen = 0;
        while seen < n {
            let next = seen;
            // An edge whose endpoints are already known or are the next new vertices, in order.
            let intro = out_edges[next]
                .iter()
                .filter(|&&(v, _)| v <= next + 1)
                .map(|&(v, l)| (next, l, v))
                .chain(in_edges[next].iter().filter(|&&(u, _)| u < next).map(|&(u, l)| (u, l, next)))
                .min_by_key(|&(u, _, v)| (u.max(v), u, v));
            match intro {
                Some(e) => {
                    seen = seen.max(e.0.max(e.2) + 1);
                    emitted.insert(e);
                    order.push(e);
                }
                // Not reachable for graphs built through the loader or builder.
                None => seen += 1,
            }
        }
        order.extend(all.iter().filter(|e| !emitted.contains(e)));
        let mut text = String::new();
        for (u, l, v) in order {
            text.push_str(&self.names[u]);
            text.push(' ');
            text.push_str(l);
            text.push(' ');
            text.push_str(&self.names[v]);
            text.push('\n');
        }
        text
    }

    pub fn save_graph_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.save_graph()).map_err(|e| Error::io(path, e))
    }
}

/// Parses triple lines `src label dst`; `#` starts a comment.
///
/// With `add_inverse`, every edge `(u, l, v)` also yields `(v, l_r, u)`.
pub fn load_graph(text: &str, add_inverse: bool) -> Result<LabeledGraph> {
    let mut b = GraphBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw
            .split_whitespace()
            .take_while(|tok| !tok.starts_with('#'))
            .collect();
        match fields.as_slice() {
            [] => continue,
            [src, label, dst] => {
                if add_inverse && label.ends_with(INVERSE_SUFFIX) {
                    return Err(Error::InverseCollision {
                        label: (*label).to_owned(),
                    });
                }
                b.add_edge(src, label, dst);
                if add_inverse {
                    b.add_edge(dst, &inverse_label(label), src);
                }
            }
            other => {
                return Err(Error::MalformedLine {
                    line,
                    message: format!("expected `src label dst`, found {} field(s)", other.len()),
                })
            }
        }
    }
    Ok(b.build())
}

pub fn load_graph_file(path: impl AsRef<Path>, add_inverse: bool) -> Result<LabeledGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_graph(&text, add_inverse)
}

/// Vertex count and per-label edge counts, most frequent label first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub per_label: Vec<(String, usize)>,
}

impl GraphStats {
    /// The `k` most frequent labels.
    pub fn top_labels(&self, k: usize) -> Vec<&str> {
        self.per_label.iter().take(k).map(|(l, _)| l.as_str()).collect()
    }
}

impl fmt::Display for GraphStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# vertices {} edges {}", self.vertices, self.edges)?;
        for (label, count) in &self.per_label {
            writeln!(f, "{label}\t{count}")?;
        }
        Ok(())
    }
}

/// Edge multiset view used to compare graphs independently of vertex numbering.
pub fn named_edges(g: &LabeledGraph) -> BTreeMap<String, BTreeSet<(String, String)>> {
    let mut out: BTreeMap<String, BTreeSet<(String, String)>> = BTreeMap::new();
    for (u, l, v) in g.edges() {
        out.entry(l.to_owned())
            .or_default()
            .insert((g.names[u].clone(), g.names[v].clone()));
    }
    out
}
