//! Witness path extraction.
//!
//! A path `x ~> y` deriving from `N` corresponds to a walk in the product
//! from `(start of N, x)` to `(final of N, y)`. Each product edge stands for
//! either a terminal graph edge or, recursively, any path deriving from the
//! nonterminal on the machine edge. Since cyclic graphs admit infinitely many
//! paths, extraction is bounded by a [`Budget`] and proceeds by word length:
//! all paths of length 0 come first, then those of length 1, and so on.

use std::cell::RefCell;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::index::KronIndex;

/// One graph edge of a path.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathEdge {
    pub src: usize,
    pub label: Arc<str>,
    pub dst: usize,
}

/// A path in the graph; possibly empty, in which case it sits at `start`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphPath {
    start: usize,
    edges: Vec<PathEdge>,
}

impl GraphPath {
    pub fn empty(vertex: usize) -> Self {
        GraphPath {
            start: vertex,
            edges: Vec::new(),
        }
    }

    /// `None` unless consecutive edges chain.
    pub fn new(start: usize, edges: Vec<PathEdge>) -> Option<Self> {
        let mut at = start;
        for e in &edges {
            if e.src != at {
                return None;
            }
            at = e.dst;
        }
        Some(GraphPath { start, edges })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.edges.last().map_or(self.start, |e| e.dst)
    }

    pub fn edges(&self) -> &[PathEdge] {
        &self.edges
    }

    /// Number of edges, which is also the word length.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn word(&self) -> Vec<&str> {
        self.edges.iter().map(|e| &*e.label).collect()
    }

    fn concat(&self, other: &GraphPath) -> GraphPath {
        debug_assert_eq!(self.end(), other.start);
        let mut edges = Vec::with_capacity(self.edges.len() + other.edges.len());
        edges.extend_from_slice(&self.edges);
        edges.extend_from_slice(&other.edges);
        GraphPath {
            start: self.start,
            edges,
        }
    }

    /// Formats as `v0 -l0-> v1 -l1-> v2` using external vertex names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PathDisplay { path: self, names }
    }
}

struct PathDisplay<'a> {
    path: &'a GraphPath,
    names: &'a [String],
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: usize| self.names.get(v).map_or("?", String::as_str);
        f.write_str(name(self.path.start))?;
        for e in &self.path.edges {
            write!(f, " -{}-> {}", e.label, name(e.dst))?;
        }
        Ok(())
    }
}

/// The labels along `path`.
pub fn word_of(path: &GraphPath) -> Vec<String> {
    path.edges.iter().map(|e| e.label.to_string()).collect()
}

/// A walk in the product graph, as `(state, vertex)` nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexPath {
    nodes: Vec<(usize, usize)>,
}

impl IndexPath {
    pub fn nodes(&self) -> &[(usize, usize)] {
        &self.nodes
    }

    /// Product edges in order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), (usize, usize))> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn len(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Limits on path extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_word_length: usize,
    pub max_paths: usize,
    pub max_index_path_edges: usize,
}

impl Budget {
    /// Word and path limits with a walk-length limit large enough that every
    /// path of length up to `max_word_length` is found in `idx`.
    pub fn for_index(idx: &KronIndex, max_word_length: usize, max_paths: usize) -> Budget {
        Budget {
            max_word_length,
            max_paths,
            max_index_path_edges: (max_word_length + 1).saturating_mul(idx.state_count().max(1)),
        }
    }
}

fn check_node(idx: &KronIndex, (s, v): (usize, usize)) -> Result<usize> {
    if s >= idx.state_count() {
        return Err(Error::OutOfRange {
            index: s,
            dim: idx.state_count(),
        });
    }
    if v >= idx.vertex_count() {
        return Err(Error::OutOfRange {
            index: v,
            dim: idx.vertex_count(),
        });
    }
    Ok(idx.composite(s, v))
}

/// Walks in the product from `from` to `to` with 1 to
/// `budget.max_index_path_edges` edges, shortest first; walks of equal
/// length come in lexicographic order of their nodes.
pub fn gen_index_paths<'a>(
    idx: &'a KronIndex,
    from: (usize, usize),
    to: (usize, usize),
    budget: &Budget,
) -> Result<IndexPaths<'a>> {
    let src = check_node(idx, from)?;
    let dst = check_node(idx, to)?;
    let limit = budget.max_index_path_edges;
    let dist = hops_to(idx, dst, limit);
    let mut queue = VecDeque::new();
    if limit > 0 && dist.contains_key(&src) {
        queue.push_back(vec![src]);
    }
    Ok(IndexPaths {
        idx,
        target: dst,
        limit,
        dist,
        queue,
        ready: VecDeque::new(),
    })
}

/// Hop distance to `target` for nodes within `limit` hops.
fn hops_to(idx: &KronIndex, target: usize, limit: usize) -> HashMap<usize, usize> {
    let back = idx.m3_transposed();
    let mut dist = HashMap::from([(target, 0)]);
    let mut frontier = VecDeque::from([target]);
    while let Some(u) = frontier.pop_front() {
        let d = dist[&u];
        if d >= limit {
            continue;
        }
        if let Some(row) = back.row_bits(u) {
            for w in row.iter() {
                dist.entry(w).or_insert_with(|| {
                    frontier.push_back(w);
                    d + 1
                });
            }
        }
    }
    dist
}

/// Breadth-first stream of product walks; see [`gen_index_paths`].
pub struct IndexPaths<'a> {
    idx: &'a KronIndex,
    target: usize,
    limit: usize,
    dist: HashMap<usize, usize>,
    queue: VecDeque<Vec<usize>>,
    ready: VecDeque<Vec<usize>>,
}

impl Iterator for IndexPaths<'_> {
    type Item = IndexPath;

    fn next(&mut self) -> Option<IndexPath> {
        while self.ready.is_empty() {
            let walk = self.queue.pop_front()?;
            let edges = walk.len() - 1;
            let last = *walk.last().expect("walks are nonempty");
            let Some(row) = self.idx.m3().row_bits(last) else {
                continue;
            };
            for w in row.iter() {
                match self.dist.get(&w) {
                    Some(&d) if edges + 1 + d <= self.limit => {}
                    _ => continue,
                }
                let mut next = walk.clone();
                next.push(w);
                if w == self.target {
                    self.ready.push_back(next.clone());
                }
                if edges + 1 < self.limit {
                    self.queue.push_back(next);
                }
            }
        }
        let walk = self.ready.pop_front()?;
        Some(IndexPath {
            nodes: walk.into_iter().map(|c| self.idx.split(c)).collect(),
        })
    }
}

/// Paths from `vs` to `vf` whose words derive from `nonterminal`, by
/// nondecreasing word length and then path order, without repetitions.
pub fn get_paths<'a>(
    idx: &'a KronIndex,
    vs: usize,
    vf: usize,
    nonterminal: &str,
    budget: &Budget,
) -> Result<PathStream<'a>> {
    let b = resolve(idx, vs, vf, nonterminal)?;
    Ok(PathStream {
        extractor: Extractor::new(idx, budget),
        root: (vs, vf, b),
        level: 0,
        buffer: VecDeque::new(),
        remaining: budget.max_paths,
        max_level: budget.max_word_length,
    })
}

fn resolve(idx: &KronIndex, vs: usize, vf: usize, nonterminal: &str) -> Result<usize> {
    let b = idx
        .rsm()
        .boxes()
        .iter()
        .position(|b| b.nonterminal == nonterminal)
        .ok_or_else(|| Error::UnknownNonterminal(nonterminal.to_owned()))?;
    for v in [vs, vf] {
        if v >= idx.vertex_count() {
            return Err(Error::OutOfRange {
                index: v,
                dim: idx.vertex_count(),
            });
        }
    }
    Ok(b)
}

/// Answers many path queries over one index with one budget, reusing the
/// work shared between them.
pub struct PathExtractor<'a> {
    extractor: Extractor<'a>,
    budget: Budget,
}

impl<'a> PathExtractor<'a> {
    pub fn new(idx: &'a KronIndex, budget: &Budget) -> Self {
        PathExtractor {
            extractor: Extractor::new(idx, budget),
            budget: *budget,
        }
    }

    /// The paths [`get_paths`] would yield, collected.
    pub fn paths(&mut self, vs: usize, vf: usize, nonterminal: &str) -> Result<Vec<GraphPath>> {
        let b = resolve(self.extractor.idx, vs, vf, nonterminal)?;
        let mut out = Vec::new();
        for len in 0..=self.budget.max_word_length {
            let key = (vs, vf, b, len);
            self.extractor.solve(key);
            let room = self.budget.max_paths - out.len();
            out.extend(self.extractor.memo[&key].iter().take(room).cloned());
            if out.len() == self.budget.max_paths {
                break;
            }
        }
        Ok(out)
    }
}

/// As [`get_paths`], with vertices given by name.
pub fn get_paths_named<'a>(
    idx: &'a KronIndex,
    vs: &str,
    vf: &str,
    nonterminal: &str,
    budget: &Budget,
) -> Result<PathStream<'a>> {
    get_paths(idx, idx.vertex_index(vs)?, idx.vertex_index(vf)?, nonterminal, budget)
}

/// Lazy path stream; see [`get_paths`].
pub struct PathStream<'a> {
    extractor: Extractor<'a>,
    root: (usize, usize, usize),
    level: usize,
    buffer: VecDeque<GraphPath>,
    remaining: usize,
    max_level: usize,
}

impl Iterator for PathStream<'_> {
    type Item = GraphPath;

    fn next(&mut self) -> Option<GraphPath> {
        if self.remaining == 0 {
            return None;
        }
        while self.buffer.is_empty() {
            if self.level > self.max_level {
                return None;
            }
            let (x, y, b) = self.root;
            let key = (x, y, b, self.level);
            self.extractor.solve(key);
            self.buffer = self.extractor.memo[&key].iter().cloned().collect();
            self.level += 1;
        }
        self.remaining -= 1;
        self.buffer.pop_front()
    }
}

/// `(x, y, box, word length)`.
type Key = (usize, usize, usize, usize);
// product walk with the least word length it can spell
type Walk = (Vec<usize>, usize);
type WalkCache = HashMap<(usize, usize), Arc<Vec<Walk>>>;

/// Ways to traverse one machine transition.
#[derive(Default)]
struct Symbols {
    terminals: Vec<Arc<str>>,
    boxes: Vec<usize>,
}

struct Extractor<'a> {
    idx: &'a KronIndex,
    max_word_length: usize,
    max_edges: usize,
    labels: HashMap<String, Arc<str>>,
    symbols: RefCell<HashMap<(usize, usize), Arc<Symbols>>>,
    // min word length to reach a target, per target
    costs: RefCell<HashMap<usize, Arc<HashMap<usize, usize>>>>,
    // walks with their min word length, per (from, to)
    walks: RefCell<WalkCache>,
    memo: HashMap<Key, BTreeSet<GraphPath>>,
    settled: HashSet<Key>,
}

impl<'a> Extractor<'a> {
    fn new(idx: &'a KronIndex, budget: &Budget) -> Self {
        let labels = idx
            .rsm()
            .terminals()
            .iter()
            .map(|t| (t.clone(), Arc::from(t.as_str())))
            .collect();
        Extractor {
            idx,
            max_word_length: budget.max_word_length,
            max_edges: budget.max_index_path_edges,
            labels,
            symbols: RefCell::default(),
            costs: RefCell::default(),
            walks: RefCell::default(),
            memo: HashMap::new(),
            settled: HashSet::new(),
        }
    }

    fn symbols(&self, si: usize, sj: usize) -> Arc<Symbols> {
        if let Some(s) = self.symbols.borrow().get(&(si, sj)) {
            return s.clone();
        }
        let rsm = self.idx.rsm();
        let mut sym = Symbols::default();
        for (label, m) in rsm.transitions().iter() {
            if !m.get(si, sj) {
                continue;
            }
            if let Some(b) = rsm.boxes().iter().position(|b| b.nonterminal == label) {
                sym.boxes.push(b);
            } else {
                sym.terminals.push(self.labels[label].clone());
            }
        }
        let sym = Arc::new(sym);
        self.symbols.borrow_mut().insert((si, sj), sym.clone());
        sym
    }

    fn nt_edge(&self, b: usize, x: usize, y: usize) -> bool {
        let nt = &self.idx.rsm().boxes()[b].nonterminal;
        self.idx.graph_final().contains(nt, x, y)
    }

    /// Lower bound on the word length contributed by product edge `u -> w`.
    fn edge_cost(&self, u: usize, w: usize) -> usize {
        let (si, vi) = self.idx.split(u);
        let (sj, vj) = self.idx.split(w);
        if vi == vj && self.symbols(si, sj).boxes.iter().any(|&b| self.nt_edge(b, vi, vi)) {
            0
        } else {
            1
        }
    }

    /// Least word length from each node to `target`, up to the word budget.
    fn costs_to(&self, target: usize) -> Arc<HashMap<usize, usize>> {
        if let Some(c) = self.costs.borrow().get(&target) {
            return c.clone();
        }
        let back = self.idx.m3_transposed();
        let mut dist = HashMap::from([(target, 0)]);
        let mut deque = VecDeque::from([(target, 0)]);
        while let Some((w, d)) = deque.pop_front() {
            if dist[&w] < d {
                continue;
            }
            let Some(row) = back.row_bits(w) else { continue };
            for u in row.iter() {
                let c = self.edge_cost(u, w);
                let du = d + c;
                if du > self.max_word_length || dist.get(&u).is_some_and(|&old| old <= du) {
                    continue;
                }
                dist.insert(u, du);
                if c == 0 {
                    deque.push_front((u, du));
                } else {
                    deque.push_back((u, du));
                }
            }
        }
        let dist = Arc::new(dist);
        self.costs.borrow_mut().insert(target, dist.clone());
        dist
    }

    /// Walks from `from` to `to` within the budgets, with their least word length.
    fn walks(&self, from: usize, to: usize) -> Arc<Vec<Walk>> {
        if let Some(w) = self.walks.borrow().get(&(from, to)) {
            return w.clone();
        }
        let costs = self.costs_to(to);
        let mut out = Vec::new();
        if self.max_edges > 0 && costs.contains_key(&from) {
            let mut walk = vec![from];
            self.extend_walks(&costs, to, &mut walk, 0, &mut out);
        }
        let out = Arc::new(out);
        self.walks.borrow_mut().insert((from, to), out.clone());
        out
    }

    fn extend_walks(
        &self,
        costs: &HashMap<usize, usize>,
        to: usize,
        walk: &mut Vec<usize>,
        cost: usize,
        out: &mut Vec<Walk>,
    ) {
        let last = *walk.last().expect("nonempty walk");
        let Some(row) = self.idx.m3().row_bits(last) else {
            return;
        };
        for w in row.iter() {
            let Some(&rest) = costs.get(&w) else { continue };
            let c = cost + self.edge_cost(last, w);
            if c + rest > self.max_word_length {
                continue;
            }
            walk.push(w);
            if w == to {
                out.push((walk.clone(), c));
            }
            if walk.len() <= self.max_edges {
                self.extend_walks(costs, to, walk, c, out);
            }
            walk.pop();
        }
    }

    /// Computes the least fixpoint of all entries `key` depends on, by a
    /// worklist that re-evaluates an entry whenever one it read has grown.
    fn solve(&mut self, key: Key) {
        if self.settled.contains(&key) {
            return;
        }
        let mut dependents: HashMap<Key, HashSet<Key>> = HashMap::new();
        let mut queue = VecDeque::from([key]);
        let mut queued = HashSet::from([key]);
        let mut touched = vec![key];
        self.memo.entry(key).or_default();
        while let Some(k) = queue.pop_front() {
            queued.remove(&k);
            let mut reads = Vec::new();
            let value = self.evaluate(k, &mut reads);
            for r in reads {
                if self.settled.contains(&r) {
                    continue;
                }
                if let Entry::Vacant(slot) = self.memo.entry(r) {
                    slot.insert(BTreeSet::new());
                    touched.push(r);
                    if queued.insert(r) {
                        queue.push_back(r);
                    }
                }
                dependents.entry(r).or_default().insert(k);
            }
            if value.len() > self.memo[&k].len() {
                self.memo.insert(k, value);
                for &d in dependents.get(&k).into_iter().flatten() {
                    if queued.insert(d) {
                        queue.push_back(d);
                    }
                }
            }
        }
        self.settled.extend(touched);
    }

    /// One application of the path equations to `key`, reading current
    /// approximations; every entry consulted is pushed to `reads`.
    fn evaluate(&self, (x, y, b, len): Key, reads: &mut Vec<Key>) -> BTreeSet<GraphPath> {
        let mut out = BTreeSet::new();
        let bx = &self.idx.rsm().boxes()[b];
        if !self.nt_edge(b, x, y) {
            return out;
        }
        if len == 0 && x == y && bx.finals.contains(&bx.start) {
            out.insert(GraphPath::empty(x));
        }
        let from = self.idx.composite(bx.start, x);
        for &f in &bx.finals {
            let to = self.idx.composite(f, y);
            for (walk, cost) in self.walks(from, to).iter() {
                if *cost <= len {
                    self.expand(walk, *cost, len, x, &mut out, reads);
                }
            }
        }
        out
    }

    /// Adds every path of word length `len` that `walk` stands for.
    fn expand(
        &self,
        walk: &[usize],
        walk_cost: usize,
        len: usize,
        x: usize,
        out: &mut BTreeSet<GraphPath>,
        reads: &mut Vec<Key>,
    ) {
        let mut partial: BTreeMap<usize, Vec<GraphPath>> = BTreeMap::from([(0, vec![GraphPath::empty(x)])]);
        let mut spent = 0;
        for pair in walk.windows(2) {
            let (u, w) = (pair[0], pair[1]);
            let c = self.edge_cost(u, w);
            // Room left for this edge given the least cost of all the others.
            let slack = len - (walk_cost - c);
            spent += c;
            let (si, vi) = self.idx.split(u);
            let (sj, vj) = self.idx.split(w);
            let sym = self.symbols(si, sj);

            let mut singles = Vec::new();
            let mut options: Vec<(usize, Vec<&GraphPath>)> = Vec::new();
            for t in &sym.terminals {
                if self.idx.graph_final().contains(t, vi, vj) {
                    singles.push(GraphPath {
                        start: vi,
                        edges: vec![PathEdge {
                            src: vi,
                            label: t.clone(),
                            dst: vj,
                        }],
                    });
                }
            }
            for &nb in &sym.boxes {
                if !self.nt_edge(nb, vi, vj) {
                    continue;
                }
                for l in c..=slack {
                    let key = (vi, vj, nb, l);
                    reads.push(key);
                    if let Some(paths) = self.memo.get(&key).filter(|p| !p.is_empty()) {
                        options.push((l, paths.iter().collect()));
                    }
                }
            }
            if !singles.is_empty() && slack >= 1 {
                options.push((1, singles.iter().collect()));
            }

            let mut next: BTreeMap<usize, Vec<GraphPath>> = BTreeMap::new();
            let rest = walk_cost - spent;
            for (&l1, prefixes) in &partial {
                for (l2, pieces) in &options {
                    let total = l1 + l2;
                    if total + rest > len {
                        continue;
                    }
                    let slot = next.entry(total).or_default();
                    for p in prefixes {
                        for q in pieces {
                            slot.push(p.concat(q));
                        }
                    }
                }
            }
            if next.is_empty() {
                return;
            }
            partial = next;
        }
        if let Some(done) = partial.remove(&len) {
            out.extend(done);
        }
    }
}
