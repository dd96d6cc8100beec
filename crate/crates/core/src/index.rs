//! Index construction.
//!
//! The graph and the recursive state machine are intersected through the
//! Kronecker product of their label matrices. Every path in the product from
//! `(start of box N, x)` to `(final of box N, y)` witnesses a word derivable
//! from `N` between `x` and `y`, which is added back to the graph as an
//! `N`-labeled edge; the loop repeats until no new edge appears. Only the
//! edges found in the previous round are multiplied again, and reachability
//! in the product is maintained incrementally, so each round costs time
//! proportional to what it discovers.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::boolmat::{kron_set, BoolMatrix, MatrixSet};
use crate::closure::DynClosure;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::language::{Rsm, RsmBox};

const MAGIC: &str = "kronpath-index";
const VERSION: u32 = 1;

/// Counters of one index construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Rounds of the outer loop.
    pub iterations: usize,
    /// Rounds that added at least one edge to the product.
    pub productive_iterations: usize,
}

/// What one round of the outer loop did.
#[derive(Debug)]
pub struct IterationReport<'a> {
    /// 1-based round number.
    pub iteration: usize,
    /// Product edges added in this round.
    pub m3_delta: &'a BoolMatrix,
    /// Newly reachable product pairs.
    pub new_pairs: usize,
    /// Nonterminal edges `(nonterminal, x, y)` added to the graph, sorted.
    pub new_edges: &'a [(String, usize, usize)],
}

/// Result of evaluating a query: the augmented graph and the product matrix
/// from which witness paths are recovered.
#[derive(Debug)]
pub struct KronIndex {
    rsm: Rsm,
    names: Vec<String>,
    by_name: HashMap<String, usize>,
    graph: MatrixSet,
    m3: BoolMatrix,
    stats: BuildStats,
    closure: OnceLock<DynClosure>,
    m3_transposed: OnceLock<BoolMatrix>,
}

/// Evaluates `rsm` over `graph`.
pub fn build_index(rsm: &Rsm, graph: &LabeledGraph) -> Result<KronIndex> {
    build_index_observed(rsm, graph, |_| {})
}

/// As [`build_index`], reporting every round to `observer`.
pub fn build_index_observed<F>(rsm: &Rsm, graph: &LabeledGraph, mut observer: F) -> Result<KronIndex>
where
    F: FnMut(&IterationReport<'_>),
{
    for label in graph.labels() {
        if rsm.is_nonterminal(label) {
            return Err(Error::LabelCollision(label.to_owned()));
        }
    }
    let n = graph.vertex_count();
    let k = rsm.state_count();
    let dim = k
        .checked_mul(n)
        .ok_or_else(|| Error::TooLarge(format!("{k} states x {n} vertices")))?;

    let mut matrices = graph.matrices().clone();
    for bx in rsm.boxes() {
        let m = matrices.entry(&bx.nonterminal);
        if bx.finals.contains(&bx.start) {
            for v in 0..n {
                m.set_unchecked(v, v);
            }
        }
    }
    let mut delta = matrices.clone();
    let mut m3 = BoolMatrix::new(dim);
    let mut closure = DynClosure::new(dim);
    let mut stats = BuildStats::default();
    let boxes = rsm.boxes();

    while !delta.is_empty() {
        stats.iterations += 1;
        let product = kron_set(rsm.transitions(), &delta)?;
        let fresh = product.difference(&m3)?;
        m3.union_into(&fresh)?;
        if !fresh.is_empty() {
            stats.productive_iterations += 1;
        }
        delta.clear();

        // Product pairs leading from a box start to one of its finals.
        let mut hits: Vec<(usize, usize, usize)> = Vec::new();
        let mut new_pairs = 0;
        for (i, j) in fresh.iter() {
            new_pairs += closure.insert_with(i, j, |u, v| {
                if let Some(b) = rsm.box_index_starting_at(u / n) {
                    if boxes[b].finals.contains(&(v / n)) {
                        hits.push((b, u % n, v % n));
                    }
                }
            });
        }
        hits.sort_unstable();
        hits.dedup();

        let mut new_edges = Vec::new();
        for (b, x, y) in hits {
            let nt = &boxes[b].nonterminal;
            if matrices.entry(nt).set_unchecked(x, y) {
                delta.entry(nt).set_unchecked(x, y);
                new_edges.push((nt.clone(), x, y));
            }
        }
        new_edges.sort();
        observer(&IterationReport {
            iteration: stats.iterations,
            m3_delta: &fresh,
            new_pairs,
            new_edges: &new_edges,
        });
    }

    let closure_cell = OnceLock::new();
    let _ = closure_cell.set(closure);
    Ok(KronIndex {
        rsm: rsm.clone(),
        names: graph.vertex_names().to_vec(),
        by_name: graph
            .vertex_names()
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect(),
        graph: matrices,
        m3,
        stats,
        closure: closure_cell,
        m3_transposed: OnceLock::new(),
    })
}

impl KronIndex {
    pub fn rsm(&self) -> &Rsm {
        &self.rsm
    }

    /// Number of graph vertices.
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    /// Number of machine states.
    pub fn state_count(&self) -> usize {
        self.rsm.state_count()
    }

    pub fn vertex_name(&self, v: usize) -> Option<&str> {
        self.names.get(v).map(String::as_str)
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    /// The graph matrices including the nonterminal edges found.
    pub fn graph_final(&self) -> &MatrixSet {
        &self.graph
    }

    /// The final Kronecker product.
    pub fn m3(&self) -> &BoolMatrix {
        &self.m3
    }

    pub(crate) fn m3_transposed(&self) -> &BoolMatrix {
        self.m3_transposed.get_or_init(|| self.m3.transpose())
    }

    /// Transitive closure of the product; rebuilt on first use after loading.
    pub fn closure(&self) -> &DynClosure {
        self.closure.get_or_init(|| DynClosure::from_matrix(&self.m3))
    }

    pub fn stats(&self) -> BuildStats {
        self.stats
    }

    /// Product index of `(state, vertex)`.
    pub fn composite(&self, state: usize, vertex: usize) -> usize {
        state * self.vertex_count() + vertex
    }

    /// `(state, vertex)` of a product index.
    pub fn split(&self, index: usize) -> (usize, usize) {
        let n = self.vertex_count();
        (index / n, index % n)
    }

    /// Matrix of `nonterminal` in the final graph.
    pub fn nonterminal_matrix(&self, nonterminal: &str) -> Result<&BoolMatrix> {
        if !self.rsm.is_nonterminal(nonterminal) {
            return Err(Error::UnknownNonterminal(nonterminal.to_owned()));
        }
        Ok(self.graph.get(nonterminal).expect("every nonterminal has a matrix"))
    }

    /// Vertex pairs connected by a path whose word derives from `nonterminal`,
    /// in index order.
    pub fn reachable_pairs(&self, nonterminal: &str) -> Result<Vec<(String, String)>> {
        Ok(self
            .nonterminal_matrix(nonterminal)?
            .iter()
            .map(|(x, y)| (self.names[x].clone(), self.names[y].clone()))
            .collect())
    }

    /// Per-nonterminal pair counts in box order.
    pub fn pair_counts(&self) -> Vec<(&str, usize)> {
        self.rsm
            .boxes()
            .iter()
            .map(|b| (b.nonterminal.as_str(), self.graph.get(&b.nonterminal).map_or(0, BoolMatrix::nnz)))
            .collect()
    }

    /// Text serialization; see the README for the layout.
    pub fn save_index(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC} {VERSION}");
        let _ = writeln!(out, "n {}", self.vertex_count());
        let _ = writeln!(out, "k {}", self.state_count());
        let _ = writeln!(out, "iterations {} {}", self.stats.iterations, self.stats.productive_iterations);
        let _ = writeln!(out, "start {}", self.rsm.start_nonterminal());
        let _ = writeln!(out, "vertices {}", self.names.len());
        for name in &self.names {
            let _ = writeln!(out, "{name}");
        }
        let _ = writeln!(out, "terminals {}", self.rsm.terminals().len());
        for t in self.rsm.terminals() {
            let _ = writeln!(out, "{t}");
        }
        let _ = writeln!(out, "boxes {}", self.rsm.boxes().len());
        for b in self.rsm.boxes() {
            let _ = write!(out, "{} {} {} {}", b.nonterminal, b.start, b.states.start, b.states.end);
            for f in &b.finals {
                let _ = write!(out, " {f}");
            }
            out.push('\n');
        }
        write_matrix_set(&mut out, "rsm", self.rsm.transitions());
        write_matrix_set(&mut out, "graph", &self.graph);
        write_coords(&mut out, "m3", &self.m3);
        out.push_str("end\n");
        out
    }

    pub fn save_index_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.save_index()).map_err(|e| Error::io(path, e))
    }

    /// Parses the output of [`KronIndex::save_index`].
    pub fn load_index(text: &str) -> Result<KronIndex> {
        let mut r = Reader {
            lines: text.lines().enumerate(),
            line: 0,
        };
        let header = r.next_line()?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(MAGIC) {
            return Err(r.corrupt("not a kronpath index"));
        }
        let version = parts.next().unwrap_or("");
        if version != VERSION.to_string() {
            return Err(Error::VersionMismatch {
                expected: VERSION,
                found: version.to_owned(),
            });
        }
        let n = r.keyed_usize("n")?;
        let k = r.keyed_usize("k")?;
        let it = r.keyed("iterations", 2)?;
        let stats = BuildStats {
            iterations: r.parse(&it[0])?,
            productive_iterations: r.parse(&it[1])?,
        };
        let start = r.keyed("start", 1)?.remove(0);
        let count = r.keyed_usize("vertices")?;
        if count != n {
            return Err(r.corrupt("vertex count disagrees with header"));
        }
        let mut names = Vec::with_capacity(n);
        for _ in 0..n {
            names.push(r.next_line()?.to_owned());
        }
        let mut terminals = BTreeSet::new();
        for _ in 0..r.keyed_usize("terminals")? {
            terminals.insert(r.next_line()?.trim().to_owned());
        }
        let box_count = r.keyed_usize("boxes")?;
        let mut boxes = Vec::with_capacity(box_count);
        for _ in 0..box_count {
            let line = r.next_line()?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() < 4 {
                return Err(r.corrupt("box line needs name, start, range"));
            }
            boxes.push(RsmBox {
                nonterminal: f[0].to_owned(),
                start: r.parse(f[1])?,
                states: r.parse(f[2])?..r.parse(f[3])?,
                finals: f[4..].iter().map(|s| r.parse(s)).collect::<Result<_>>()?,
            });
        }
        let transitions = r.matrix_set("rsm", k)?;
        let rsm = Rsm::from_parts(boxes, transitions, &start, terminals)
            .map_err(|e| r.corrupt(format!("machine section: {e}")))?;
        let graph = r.matrix_set("graph", n)?;
        let dim = k.checked_mul(n).ok_or_else(|| r.corrupt("dimension overflow"))?;
        let m3 = r.coords("m3", dim)?;
        if r.next_line()? != "end" {
            return Err(r.corrupt("expected `end`"));
        }
        let mut graph = graph;
        for b in rsm.boxes() {
            graph.entry(&b.nonterminal);
        }
        let by_name: HashMap<String, usize> = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        if by_name.len() != names.len() {
            return Err(Error::CorruptIndex {
                line: 0,
                message: "duplicate vertex names".into(),
            });
        }
        Ok(KronIndex {
            rsm,
            names,
            by_name,
            graph,
            m3,
            stats,
            closure: OnceLock::new(),
            m3_transposed: OnceLock::new(),
        })
    }

    pub fn load_index_file(path: impl AsRef<Path>) -> Result<KronIndex> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        KronIndex::load_index(&text)
    }
}

impl PartialEq for KronIndex {
    fn eq(&self, other: &Self) -> bool {
        self.rsm == other.rsm
            && self.names == other.names
            && self.graph == other.graph
            && self.m3 == other.m3
            && self.stats == other.stats
    }
}

fn write_coords(out: &mut String, tag: &str, m: &BoolMatrix) {
    let _ = writeln!(out, "{tag} {}", m.nnz());
    for (r, c) in m.iter() {
        let _ = writeln!(out, "{r} {c}");
    }
}

fn write_matrix_set(out: &mut String, tag: &str, set: &MatrixSet) {
    let nonempty: Vec<_> = set.iter().filter(|(_, m)| !m.is_empty()).collect();
    let _ = writeln!(out, "{tag} {}", nonempty.len());
    for (label, m) in nonempty {
        let _ = write!(out, "label {label} ");
        write_coords(out, "", m);
    }
}

struct Reader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Reader<'a> {
    fn corrupt(&self, message: impl Into<String>) -> Error {
        Error::CorruptIndex {
            line: self.line,
            message: message.into(),
        }
    }

    fn next_line(&mut self) -> Result<&'a str> {
        match self.lines.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l)
            }
            None => {
                self.line += 1;
                Err(self.corrupt("unexpected end of file"))
            }
        }
    }

    fn parse<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.corrupt(format!("expected a number, found `{s}`")))
    }

    /// Reads `key v1 .. vN`.
    fn keyed(&mut self, key: &str, arity: usize) -> Result<Vec<String>> {
        let line = self.next_line()?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return Err(self.corrupt(format!("expected `{key}`")));
        }
        let values: Vec<String> = parts.map(str::to_owned).collect();
        if values.len() != arity {
            return Err(self.corrupt(format!("`{key}` takes {arity} value(s)")));
        }
        Ok(values)
    }

    fn keyed_usize(&mut self, key: &str) -> Result<usize> {
        let v = self.keyed(key, 1)?;
        self.parse(&v[0])
    }

    fn coord_lines(&mut self, count: usize, dim: usize) -> Result<BoolMatrix> {
        let mut m = BoolMatrix::new(dim);
        for _ in 0..count {
            let line = self.next_line()?;
            let mut parts = line.split_whitespace();
            let (Some(r), Some(c), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(self.corrupt("expected `row col`"));
            };
            let (r, c): (usize, usize) = (self.parse(r)?, self.parse(c)?);
            if r >= dim || c >= dim {
                return Err(self.corrupt(format!("coordinate ({r}, {c}) outside dimension {dim}")));
            }
            m.set_unchecked(r, c);
        }
        Ok(m)
    }

    fn coords(&mut self, tag: &str, dim: usize) -> Result<BoolMatrix> {
        let count = self.keyed_usize(tag)?;
        self.coord_lines(count, dim)
    }

    fn matrix_set(&mut self, tag: &str, dim: usize) -> Result<MatrixSet> {
        let labels = self.keyed_usize(tag)?;
        let mut set = MatrixSet::new(dim);
        for _ in 0..labels {
            let v = self.keyed("label", 2)?;
            let count = self.parse(&v[1])?;
            let m = self.coord_lines(count, dim)?;
            set.insert(v[0].clone(), m)?;
        }
        Ok(set)
    }
}
