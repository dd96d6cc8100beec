//! Python bindings: `Graph`, `Query` and `Index`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use kronpath::{
    build_index, grammar_to_rsm_with, load_graph, load_graph_file, parse_grammar, parse_regex, queries, Budget,
    BuiltinGrammar, Grammar, GraphBuilder, KronIndex, LabeledGraph, PathExtractor, Rsm, RsmOptions, SyntheticSpec,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError};
use pyo3::prelude::*;

create_exception!(pykronpath, KronpathError, PyException, "Malformed input or a failed query.");

fn to_py(e: kronpath::Error) -> PyErr {
    match e {
        kronpath::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => KronpathError::new_err(other.to_string()),
    }
}

/// An edge-labeled graph with named vertices.
#[pyclass(frozen, module = "pykronpath")]
pub struct Graph {
    inner: LabeledGraph,
}

#[pymethods]
impl Graph {
    /// Graph of `(src, label, dst)` triples.
    #[new]
    #[pyo3(signature = (edges, add_inverse = false))]
    fn new(edges: Vec<(String, String, String)>, add_inverse: bool) -> PyResult<Self> {
        let mut b = GraphBuilder::new();
        for (u, l, v) in &edges {
            if add_inverse {
                if l.ends_with("_r") {
                    return Err(to_py(kronpath::Error::InverseCollision { label: l.clone() }));
                }
                b.add_edge(v, &kronpath::graph::inverse_label(l), u);
            }
            b.add_edge(u, l, v);
        }
        Ok(Graph { inner: b.build() })
    }

    /// Parses whitespace-separated `src label dst` lines.
    #[staticmethod]
    #[pyo3(signature = (text, add_inverse = false))]
    fn from_text(text: &str, add_inverse: bool) -> PyResult<Self> {
        Ok(Graph {
            inner: load_graph(text, add_inverse).map_err(to_py)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (path, add_inverse = false))]
    fn load(path: PathBuf, add_inverse: bool) -> PyResult<Self> {
        Ok(Graph {
            inner: load_graph_file(path, add_inverse).map_err(to_py)?,
        })
    }

    /// Random graph; label `i` of `labels` is drawn with weight `len - i`.
    #[staticmethod]
    #[pyo3(signature = (edges, labels, seed = 0, vertices = None, add_inverse = false))]
    fn synthetic(edges: usize, labels: Vec<String>, seed: u64, vertices: Option<usize>, add_inverse: bool) -> Self {
        let mut spec = SyntheticSpec::new(edges, 0, seed).with_labels(labels);
        if let Some(v) = vertices {
            spec.vertices = v;
        }
        Graph {
            inner: spec.build(add_inverse),
        }
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.vertex_names().to_vec()
    }

    fn edges(&self) -> Vec<(String, String, String)> {
        let names = self.inner.vertex_names();
        self.inner
            .edges()
            .map(|(u, l, v)| (names[u].clone(), l.to_owned(), names[v].clone()))
            .collect()
    }

    /// `(label, count)` pairs, most frequent first.
    fn label_counts(&self) -> Vec<(String, usize)> {
        self.inner.stats().per_label
    }

    fn to_text(&self) -> String {
        self.inner.save_graph()
    }

    fn __len__(&self) -> usize {
        self.inner.edge_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// A compiled query: a grammar or a regex turned into a state machine.
#[pyclass(frozen, module = "pykronpath")]
pub struct Query {
    grammar: Grammar,
    rsm: Rsm,
}

impl Query {
    fn compile(grammar: Grammar, determinize: bool) -> Self {
        let rsm = grammar_to_rsm_with(&grammar, RsmOptions { determinize });
        Query { grammar, rsm }
    }
}

#[pymethods]
impl Query {
    /// Grammar text, one `Lhs -> body` rule per line.
    #[staticmethod]
    #[pyo3(signature = (text, start = None, determinize = false))]
    fn grammar(text: &str, start: Option<&str>, determinize: bool) -> PyResult<Self> {
        let mut g = parse_grammar(text).map_err(to_py)?;
        if let Some(s) = start {
            g = g.with_start(s).map_err(to_py)?;
        }
        Ok(Query::compile(g, determinize))
    }

    /// A regular query; its single nonterminal is named `start`.
    #[staticmethod]
    #[pyo3(signature = (text, start = "S", determinize = false))]
    fn regex(text: &str, start: &str, determinize: bool) -> PyResult<Self> {
        let ast = parse_regex(text).map_err(to_py)?;
        Ok(Query::compile(Grammar::from_regex(ast, start), determinize))
    }

    /// One of `g1`, `g2`, `geo`, `ma`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let b: BuiltinGrammar = name.parse().map_err(to_py)?;
        Ok(Query::compile(b.grammar(), false))
    }

    /// A benchmark template such as `Q4^2` with its placeholders bound to `labels` in order.
    #[staticmethod]
    fn template(name: &str, labels: Vec<String>) -> PyResult<Self> {
        let t = queries::template(name).ok_or_else(|| KronpathError::new_err(format!("unknown template `{name}`")))?;
        let ast = t.instantiate(&labels).map_err(to_py)?;
        Ok(Query::compile(Grammar::from_regex(ast, "S"), false))
    }

    /// Names of all benchmark templates.
    #[staticmethod]
    fn template_names() -> Vec<&'static str> {
        queries::templates().into_iter().map(|t| t.name).collect()
    }

    #[getter]
    fn start(&self) -> &str {
        self.grammar.start()
    }

    #[getter]
    fn nonterminals(&self) -> Vec<String> {
        self.grammar.nonterminals().to_vec()
    }

    #[getter]
    fn state_count(&self) -> usize {
        self.rsm.state_count()
    }

    /// Whether the start nonterminal derives `word`.
    fn accepts(&self, word: Vec<String>) -> PyResult<bool> {
        kronpath::rsm_simulate(&self.rsm, &word).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Query(start={:?}, states={})", self.grammar.start(), self.rsm.state_count())
    }
}

/// The evaluated query over a graph.
#[pyclass(frozen, module = "pykronpath")]
pub struct Index {
    inner: KronIndex,
}

#[pymethods]
impl Index {
    /// Evaluates `query` on `graph`, releasing the interpreter lock meanwhile.
    #[staticmethod]
    fn build(py: Python<'_>, query: &Query, graph: &Graph) -> PyResult<Self> {
        let inner = py
            .detach(|| build_index(&query.rsm, &graph.inner))
            .map_err(to_py)?;
        Ok(Index { inner })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(Index {
            inner: KronIndex::load_index_file(path).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn loads(text: &str) -> PyResult<Self> {
        Ok(Index {
            inner: KronIndex::load_index(text).map_err(to_py)?,
        })
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        self.inner.save_index_file(path).map_err(to_py)
    }

    fn dumps(&self) -> String {
        self.inner.save_index()
    }

    /// Sorted `(x, y)` vertex-name pairs; the start nonterminal by default.
    #[pyo3(signature = (nonterminal = None))]
    fn reachable_pairs(&self, nonterminal: Option<&str>) -> PyResult<Vec<(String, String)>> {
        let nt = nonterminal.unwrap_or(self.inner.rsm().start_nonterminal());
        self.inner.reachable_pairs(nt).map_err(to_py)
    }

    fn pair_counts(&self) -> BTreeMap<String, usize> {
        self.inner
            .pair_counts()
            .into_iter()
            .map(|(nt, c)| (nt.to_owned(), c))
            .collect()
    }

    /// Paths from `source` to `target` deriving from `nonterminal`, each a
    /// list of `(src, label, dst)` edges, shortest word first.
    #[pyo3(signature = (source, target, nonterminal = None, max_word_len = 8, max_paths = 100))]
    fn paths(
        &self,
        source: &str,
        target: &str,
        nonterminal: Option<&str>,
        max_word_len: usize,
        max_paths: usize,
    ) -> PyResult<Vec<Vec<(String, String, String)>>> {
        let idx = &self.inner;
        let nt = nonterminal.unwrap_or(idx.rsm().start_nonterminal());
        let vs = idx.vertex_index(source).map_err(to_py)?;
        let vf = idx.vertex_index(target).map_err(to_py)?;
        let budget = Budget::for_index(idx, max_word_len, max_paths);
        let found = PathExtractor::new(idx, &budget).paths(vs, vf, nt).map_err(to_py)?;
        let names = idx.vertex_names();
        Ok(found
            .iter()
            .map(|p| {
                p.edges()
                    .iter()
                    .map(|e| (names[e.src].clone(), e.label.to_string(), names[e.dst].clone()))
                    .collect()
            })
            .collect())
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.stats().iterations
    }

    #[getter]
    fn productive_iterations(&self) -> usize {
        self.inner.stats().productive_iterations
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Index(vertices={}, states={}, iterations={})",
            self.inner.vertex_count(),
            self.inner.state_count(),
            self.inner.stats().iterations
        )
    }
}

#[pymodule]
fn pykronpath(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Query>()?;
    m.add_class::<Index>()?;
    m.add("KronpathError", m.py().get_type::<KronpathError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
