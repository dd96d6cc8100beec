//! Slow, simple reference implementations used to check the engine.
//!
//! Everything here favors obviousness over speed and shares no algorithmic
//! code with `kronpath` beyond its data types.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use kronpath::{BoolMatrix, Grammar, GraphPath, LabeledGraph, MatrixSet, PathEdge, RegexAst, Rsm};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Sym {
    T(String),
    N(usize),
}

/// Grammar in Chomsky normal form over numbered nonterminals.
///
/// The productions derive exactly the nonempty words of the original
/// grammar; which nonterminals also derive the empty word is kept apart.
#[derive(Clone, Debug)]
pub struct CnfGrammar {
    names: Vec<String>,
    original: usize,
    start: usize,
    binary: BTreeSet<(usize, usize, usize)>,
    unary: BTreeSet<(usize, String)>,
    nullable: BTreeSet<usize>,
}

impl CnfGrammar {
    pub fn id(&self, name: &str) -> Option<usize> {
        self.names[..self.original].iter().position(|n| n == name)
    }

    /// Nonterminals of the source grammar, in its order.
    pub fn original_nonterminals(&self) -> &[String] {
        &self.names[..self.original]
    }

    pub fn start(&self) -> &str {
        &self.names[self.start]
    }

    pub fn is_nullable(&self, name: &str) -> bool {
        self.id(name).is_some_and(|i| self.nullable.contains(&i))
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn binary_rules(&self) -> usize {
        self.binary.len()
    }

    pub fn terminal_rules(&self) -> usize {
        self.unary.len()
    }
}

struct Bnf {
    names: Vec<String>,
    rules: BTreeSet<(usize, Vec<Sym>)>,
}

impl Bnf {
    fn fresh(&mut self) -> usize {
        self.names.push(format!("#{}", self.names.len()));
        self.names.len() - 1
    }

    fn lower(&mut self, ast: &RegexAst, ids: &HashMap<String, usize>) -> Sym {
        let node = match ast {
            RegexAst::Symbol(s) => {
                return match ids.get(s) {
                    Some(&n) => Sym::N(n),
                    None => Sym::T(s.clone()),
                }
            }
            _ => self.fresh(),
        };
        match ast {
            RegexAst::Symbol(_) => unreachable!(),
            RegexAst::Empty => {}
            RegexAst::Epsilon => {
                self.rules.insert((node, vec![]));
            }
            RegexAst::Alt(xs) => {
                for x in xs {
                    let s = self.lower(x, ids);
                    self.rules.insert((node, vec![s]));
                }
            }
            RegexAst::Concat(xs) => {
                let body = xs.iter().map(|x| self.lower(x, ids)).collect();
                self.rules.insert((node, body));
            }
            RegexAst::Star(x) => {
                let s = self.lower(x, ids);
                self.rules.insert((node, vec![]));
                self.rules.insert((node, vec![s, Sym::N(node)]));
            }
            RegexAst::Plus(x) => {
                let s = self.lower(x, ids);
                self.rules.insert((node, vec![s.clone()]));
                self.rules.insert((node, vec![s, Sym::N(node)]));
            }
            RegexAst::Optional(x) => {
                let s = self.lower(x, ids);
                self.rules.insert((node, vec![]));
                self.rules.insert((node, vec![s]));
            }
        }
        Sym::N(node)
    }
}

/// Textbook conversion: regular right-hand sides become fresh
/// nonterminals, then ε-rules, unit rules and long rules are eliminated.
pub fn to_cnf(g: &Grammar) -> CnfGrammar {
    let ids: HashMap<String, usize> = g.nonterminals().iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    let mut bnf = Bnf {
        names: g.nonterminals().to_vec(),
        rules: BTreeSet::new(),
    };
    for (i, nt) in g.nonterminals().iter().enumerate() {
        let s = bnf.lower(g.rule(nt).unwrap(), &ids);
        bnf.rules.insert((i, vec![s]));
    }

    let mut nullable = BTreeSet::new();
    loop {
        let before = nullable.len();
        for (a, body) in &bnf.rules {
            if body.iter().all(|s| matches!(s, Sym::N(n) if nullable.contains(n))) {
                nullable.insert(*a);
            }
        }
        if nullable.len() == before {
            break;
        }
    }

    // Every way of dropping nullable symbols, keeping nonempty bodies.
    let mut rules: BTreeSet<(usize, Vec<Sym>)> = BTreeSet::new();
    for (a, body) in &bnf.rules {
        let optional: Vec<usize> = (0..body.len())
            .filter(|&i| matches!(&body[i], Sym::N(n) if nullable.contains(n)))
            .collect();
        for mask in 0u64..(1 << optional.len()) {
            let kept: Vec<Sym> = body
                .iter()
                .enumerate()
                .filter(|(i, _)| match optional.iter().position(|o| o == i) {
                    Some(bit) => mask & (1 << bit) == 0,
                    None => true,
                })
                .map(|(_, s)| s.clone())
                .collect();
            if !kept.is_empty() {
                rules.insert((*a, kept));
            }
        }
    }

    // Unit closure: a =>* b through single-nonterminal bodies.
    let count = bnf.names.len();
    let mut unit: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); count];
    for (a, u) in unit.iter_mut().enumerate() {
        u.insert(a);
    }
    loop {
        let mut changed = false;
        for (a, body) in &rules {
            if let [Sym::N(b)] = body.as_slice() {
                let reach: Vec<usize> = unit[*b].iter().copied().collect();
                for set in unit.iter_mut() {
                    if set.contains(a) {
                        for &r in &reach {
                            changed |= set.insert(r);
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let proper: Vec<(usize, Vec<Sym>)> = rules
        .iter()
        .filter(|(_, body)| !matches!(body.as_slice(), [Sym::N(_)]))
        .cloned()
        .collect();

    let mut names = bnf.names;
    let mut binary = BTreeSet::new();
    let mut unary = BTreeSet::new();
    let mut term_nt: BTreeMap<String, usize> = BTreeMap::new();
    let fresh = |names: &mut Vec<String>| {
        names.push(format!("#{}", names.len()));
        names.len() - 1
    };
    for a in 0..count {
        for (b, body) in &proper {
            if !unit[a].contains(b) {
                continue;
            }
            if let [Sym::T(t)] = body.as_slice() {
                unary.insert((a, t.clone()));
                continue;
            }
            let mut syms: Vec<usize> = Vec::with_capacity(body.len());
            for s in body {
                syms.push(match s {
                    Sym::N(n) => *n,
                    Sym::T(t) => match term_nt.get(t) {
                        Some(&n) => n,
                        None => {
                            let n = fresh(&mut names);
                            unary.insert((n, t.clone()));
                            term_nt.insert(t.clone(), n);
                            n
                        }
                    },
                });
            }
            let mut lhs = a;
            while syms.len() > 2 {
                let rest = fresh(&mut names);
                binary.insert((lhs, syms[0], rest));
                syms.remove(0);
                lhs = rest;
            }
            binary.insert((lhs, syms[0], syms[1]));
        }
    }
    CnfGrammar {
        original: g.nonterminals().len(),
        start: ids[g.start()],
        names,
        binary,
        unary,
        nullable,
    }
}

/// Cocke–Younger–Kasami membership of `word` in the language of `nonterminal`.
pub fn cyk<S: AsRef<str>>(cnf: &CnfGrammar, nonterminal: &str, word: &[S]) -> bool {
    let Some(target) = cnf.id(nonterminal) else {
        return false;
    };
    let n = word.len();
    if n == 0 {
        return cnf.nullable.contains(&target);
    }
    // table[i][l - 1]: nonterminals deriving word[i..i + l]
    let mut table = vec![vec![BTreeSet::new(); n]; n];
    for (i, w) in word.iter().enumerate() {
        for (a, t) in &cnf.unary {
            if t == w.as_ref() {
                table[i][0].insert(*a);
            }
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let mut cell = BTreeSet::new();
            for split in 1..len {
                let (left, right) = (&table[i][split - 1], &table[i + split][len - split - 1]);
                for &(a, b, c) in &cnf.binary {
                    if left.contains(&b) && right.contains(&c) {
                        cell.insert(a);
                    }
                }
            }
            table[i][len - 1] = cell;
        }
    }
    table[0][n - 1].contains(&target)
}

type Facts = BTreeMap<String, BTreeSet<(usize, usize)>>;

fn name_facts(cnf: &CnfGrammar, facts: &BTreeSet<(usize, usize, usize)>) -> Facts {
    let mut out: Facts = cnf.original_nonterminals().iter().map(|n| (n.clone(), BTreeSet::new())).collect();
    for &(a, u, v) in facts {
        if a < cnf.original {
            out.get_mut(&cnf.names[a]).unwrap().insert((u, v));
        }
    }
    out
}

fn seed_facts(cnf: &CnfGrammar, g: &LabeledGraph) -> BTreeSet<(usize, usize, usize)> {
    let mut facts = BTreeSet::new();
    for (u, label, v) in g.edges() {
        for (a, t) in &cnf.unary {
            if t == label {
                facts.insert((*a, u, v));
            }
        }
    }
    for &a in &cnf.nullable {
        for v in 0..g.vertex_count() {
            facts.insert((a, v, v));
        }
    }
    facts
}

/// Worklist CFL-reachability: pairs `(u, v)` per source nonterminal such
/// that some path `u ~> v` spells a word of its language.
pub fn cfl_reach_oracle(cnf: &CnfGrammar, g: &LabeledGraph) -> Facts {
    let mut facts = seed_facts(cnf, g);
    let mut worklist: VecDeque<(usize, usize, usize)> = facts.iter().copied().collect();
    let mut by_start: HashMap<(usize, usize), BTreeSet<usize>> = HashMap::new();
    let mut by_end: HashMap<(usize, usize), BTreeSet<usize>> = HashMap::new();
    for &(a, u, v) in &facts {
        by_start.entry((a, u)).or_default().insert(v);
        by_end.entry((a, v)).or_default().insert(u);
    }
    while let Some((b, u, v)) = worklist.pop_front() {
        let mut derived = Vec::new();
        for &(a, x, y) in &cnf.binary {
            if x == b {
                for &w in by_start.get(&(y, v)).into_iter().flatten() {
                    derived.push((a, u, w));
                }
            }
            if y == b {
                for &w in by_end.get(&(x, u)).into_iter().flatten() {
                    derived.push((a, w, v));
                }
            }
        }
        for f in derived {
            if facts.insert(f) {
                by_start.entry((f.0, f.1)).or_default().insert(f.2);
                by_end.entry((f.0, f.2)).or_default().insert(f.1);
                worklist.push_back(f);
            }
        }
    }
    name_facts(cnf, &facts)
}

/// Matrix formulation of the same problem: `T[A] |= T[B] * T[C]` for every
/// rule `A -> B C` until nothing changes.
pub fn cfl_reach_matrix_oracle(cnf: &CnfGrammar, g: &LabeledGraph) -> Facts {
    let n = g.vertex_count();
    let mut t = vec![vec![vec![false; n]; n]; cnf.names.len()];
    for (a, u, v) in seed_facts(cnf, g) {
        t[a][u][v] = true;
    }
    loop {
        let mut changed = false;
        for &(a, b, c) in &cnf.binary {
            for i in 0..n {
                for k in 0..n {
                    if !t[b][i][k] {
                        continue;
                    }
                    for j in 0..n {
                        if t[c][k][j] && !t[a][i][j] {
                            t[a][i][j] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut facts = BTreeSet::new();
    for (a, m) in t.iter().enumerate() {
        for (i, row) in m.iter().enumerate() {
            for (j, &bit) in row.iter().enumerate() {
                if bit {
                    facts.insert((a, i, j));
                }
            }
        }
    }
    name_facts(cnf, &facts)
}

/// Thompson automaton with ε-moves, labels `None`.
#[derive(Clone, Debug)]
pub struct ThompsonNfa {
    states: usize,
    start: usize,
    accept: usize,
    moves: Vec<(usize, Option<String>, usize)>,
}

impl ThompsonNfa {
    pub fn new(ast: &RegexAst) -> Self {
        let mut nfa = ThompsonNfa {
            states: 0,
            start: 0,
            accept: 0,
            moves: Vec::new(),
        };
        let (s, f) = nfa.build(ast);
        nfa.start = s;
        nfa.accept = f;
        nfa
    }

    fn state(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    fn build(&mut self, ast: &RegexAst) -> (usize, usize) {
        let (s, f) = (self.state(), self.state());
        match ast {
            RegexAst::Empty => {}
            RegexAst::Epsilon => self.moves.push((s, None, f)),
            RegexAst::Symbol(l) => self.moves.push((s, Some(l.clone()), f)),
            RegexAst::Alt(xs) => {
                for x in xs {
                    let (a, b) = self.build(x);
                    self.moves.push((s, None, a));
                    self.moves.push((b, None, f));
                }
            }
            RegexAst::Concat(xs) => {
                let mut at = s;
                for x in xs {
                    let (a, b) = self.build(x);
                    self.moves.push((at, None, a));
                    at = b;
                }
                self.moves.push((at, None, f));
            }
            RegexAst::Star(x) | RegexAst::Plus(x) | RegexAst::Optional(x) => {
                let (a, b) = self.build(x);
                self.moves.push((s, None, a));
                self.moves.push((b, None, f));
                if !matches!(ast, RegexAst::Plus(_)) {
                    self.moves.push((s, None, f));
                }
                if !matches!(ast, RegexAst::Optional(_)) {
                    self.moves.push((b, None, a));
                }
            }
        }
        (s, f)
    }

    /// Whether the automaton accepts `word`.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut current = self.closure(BTreeSet::from([self.start]));
        for w in word {
            let next = self
                .moves
                .iter()
                .filter(|(p, l, _)| current.contains(p) && l.as_deref() == Some(w.as_ref()))
                .map(|(_, _, q)| *q)
                .collect();
            current = self.closure(next);
        }
        current.contains(&self.accept)
    }

    fn closure(&self, mut set: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(p) = stack.pop() {
            for (a, l, q) in &self.moves {
                if *a == p && l.is_none() && set.insert(*q) {
                    stack.push(*q);
                }
            }
        }
        set
    }
}

/// Pairs `(x, y)` such that some path `x ~> y` spells a word matched by
/// `regex`, by breadth-first search over `(vertex, automaton state)`.
pub fn rpq_bfs_oracle(regex: &RegexAst, g: &LabeledGraph) -> BTreeSet<(usize, usize)> {
    let nfa = ThompsonNfa::new(regex);
    let edges: Vec<(usize, &str, usize)> = g.edges().collect();
    let mut out = BTreeSet::new();
    for x in 0..g.vertex_count() {
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut queue = VecDeque::new();
        for q in nfa.closure(BTreeSet::from([nfa.start])) {
            if seen.insert((x, q)) {
                queue.push_back((x, q));
            }
        }
        while let Some((v, q)) = queue.pop_front() {
            if q == nfa.accept {
                out.insert((x, v));
            }
            for &(u, label, w) in &edges {
                if u != v {
                    continue;
                }
                for (p, l, r) in &nfa.moves {
                    if *p == q && l.as_deref() == Some(label) {
                        for r2 in nfa.closure(BTreeSet::from([*r])) {
                            if seen.insert((w, r2)) {
                                queue.push_back((w, r2));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Pairs connected by a path of one or more edges, by Warshall's algorithm.
pub fn warshall(dim: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut r = vec![vec![false; dim]; dim];
    for (i, j) in edges {
        r[i][j] = true;
    }
    for k in 0..dim {
        for i in 0..dim {
            if r[i][k] {
                for j in 0..dim {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in r.iter().enumerate() {
        for (j, &bit) in row.iter().enumerate() {
            if bit {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Every walk in `g` with at most `max_len` edges, including the empty walk
/// at each vertex.
pub fn enumerate_walks(g: &LabeledGraph, max_len: usize) -> Vec<GraphPath> {
    let edges: Vec<(usize, Arc<str>, usize)> = g.edges().map(|(u, l, v)| (u, Arc::from(l), v)).collect();
    let mut out = Vec::new();
    let mut layer: Vec<(usize, Vec<PathEdge>)> = (0..g.vertex_count()).map(|v| (v, Vec::new())).collect();
    for depth in 0..=max_len {
        let mut next = Vec::new();
        for (start, walk) in &layer {
            out.push(GraphPath::new(*start, walk.clone()).expect("chained"));
            if depth == max_len {
                continue;
            }
            let at = walk.last().map_or(*start, |e| e.dst);
            for (u, l, v) in &edges {
                if *u == at {
                    let mut w = walk.clone();
                    w.push(PathEdge {
                        src: *u,
                        label: l.clone(),
                        dst: *v,
                    });
                    next.push((*start, w));
                }
            }
        }
        layer = next;
    }
    out
}

/// Index construction without deltas: every round multiplies the machine
/// with the whole current graph and recomputes reachability from scratch.
/// Returns the product and the final graph matrices.
pub fn full_recompute_index(rsm: &Rsm, g: &LabeledGraph) -> (BoolMatrix, MatrixSet) {
    let n = g.vertex_count();
    let k = rsm.state_count();
    let mut graph = g.matrices().clone();
    for b in rsm.boxes() {
        graph.entry(&b.nonterminal);
        if b.finals.contains(&b.start) {
            for v in 0..n {
                graph.set(&b.nonterminal, v, v).unwrap();
            }
        }
    }
    loop {
        let product = kron_reference(rsm.transitions(), &graph, k, n);
        let reach = warshall(k * n, product.iter());
        let mut changed = false;
        for (i, j) in reach {
            let (s, x, f, y) = (i / n, i % n, j / n, j % n);
            for b in rsm.boxes() {
                if b.start == s && b.finals.contains(&f) {
                    changed |= graph.set(&b.nonterminal, x, y).unwrap();
                }
            }
        }
        if !changed {
            return (product, graph);
        }
    }
}

/// Kronecker product by the defining formula, summed over shared labels.
fn kron_reference(machine: &MatrixSet, graph: &MatrixSet, k: usize, n: usize) -> BoolMatrix {
    let mut out = BoolMatrix::new(k * n);
    for (label, m) in machine.iter() {
        let Some(gm) = graph.get(label) else { continue };
        for (p, q) in m.iter() {
            for (u, v) in gm.iter() {
                out.set(p * n + u, q * n + v).unwrap();
            }
        }
    }
    out
}

/// Random graph with `edges` edge draws over vertices named `0..n` and
/// `labels`. Only vertices touched by an edge exist, numbered by first use.
pub fn random_graph(rng: &mut impl Rng, n: usize, edges: usize, labels: &[&str]) -> LabeledGraph {
    let mut b = LabeledGraph::builder();
    for _ in 0..edges {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let l = labels.choose(rng).unwrap();
        b.add_edge(&u.to_string(), l, &v.to_string());
    }
    b.build()
}

/// Grammars exercised by the randomized suites, over terminals `a`, `b`, `c`.
pub fn test_grammars() -> Vec<(&'static str, Grammar)> {
    [
        ("same-generation", "S -> a S b | a b"),
        ("dyck", "S -> a S b | S S | a b"),
        ("nullable", "S -> a S b S | ()"),
        ("inverse-chain", "S -> c S a | b"),
        ("alias", "S -> c V c\nV -> (S? b)* S? (a S?)*"),
    ]
    .into_iter()
    .map(|(name, src)| (name, kronpath::parse_grammar(src).unwrap()))
    .collect()
}

/// A random template instantiated over `labels` (which may repeat symbols).
pub fn random_template_regex(rng: &mut impl Rng, labels: &[&str]) -> (String, RegexAst) {
    let templates = kronpath::templates();
    let t = templates.choose(rng).unwrap();
    let chosen: Vec<&str> = (0..t.arity()).map(|_| *labels.choose(rng).unwrap()).collect();
    (t.name.to_owned(), t.instantiate(&chosen).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use kronpath::{load_graph, parse_grammar, parse_regex};
    use rand::SeedableRng;

    const FIG1: &str = "0 a 1\n1 a 0\n1 b 1\n";

    #[test]
    fn cnf_of_same_generation() {
        let cnf = to_cnf(&parse_grammar("S -> a S b | a b").unwrap());
        assert!(cnf.nonterminal_count() > 1);
        assert!(cyk(&cnf, "S", &["a", "a", "b", "b"]));
        assert!(cyk(&cnf, "S", &["a", "b"]));
        assert!(!cyk(&cnf, "S", &["a", "b", "b"]));
        assert!(!cyk::<&str>(&cnf, "S", &[]));
    }

    #[test]
    fn cnf_tracks_nullable_start() {
        let cnf = to_cnf(&parse_grammar("S -> ()").unwrap());
        assert!(cnf.is_nullable("S"));
        assert!(cyk::<&str>(&cnf, "S", &[]));
        let dyck = to_cnf(&parse_grammar("S -> a S b S | ()").unwrap());
        assert!(cyk(&dyck, "S", &["a", "a", "b", "b"]));
        assert!(cyk(&dyck, "S", &["a", "b", "a", "b"]));
        assert!(!cyk(&dyck, "S", &["b", "a"]));
    }

    #[test]
    fn cnf_agrees_with_machine_simulation() {
        let alphabet = ["a", "b", "c"];
        for (name, g) in test_grammars() {
            let cnf = to_cnf(&g);
            let rsm = kronpath::grammar_to_rsm(&g);
            let mut words: Vec<Vec<&str>> = vec![vec![]];
            for len in 1..=5 {
                let mut next = Vec::new();
                for w in words.iter().filter(|w| w.len() == len - 1) {
                    for a in alphabet {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push(w2);
                    }
                }
                words.extend(next);
            }
            for w in &words {
                // Words with symbols foreign to the grammar are rejected.
                assert_eq!(cyk(&cnf, "S", w), rsm.simulate(w).unwrap_or(false), "{name} {w:?}");
            }
        }
    }

    #[test]
    fn reachability_on_example() {
        let g = load_graph(FIG1, false).unwrap();
        let cnf = to_cnf(&parse_grammar("S -> a S b | a b").unwrap());
        let expected = BTreeSet::from([(0, 1), (1, 1)]);
        assert_eq!(cfl_reach_oracle(&cnf, &g)["S"], expected);
        assert_eq!(cfl_reach_matrix_oracle(&cnf, &g)["S"], expected);
        let empty = load_graph("", false).unwrap();
        assert!(cfl_reach_oracle(&cnf, &empty)["S"].is_empty());
    }

    #[test]
    fn oracles_agree_on_random_instances() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let g = random_graph(&mut rng, 6, 12, &["a", "b", "c"]);
            for (_, gr) in test_grammars() {
                let cnf = to_cnf(&gr);
                assert_eq!(cfl_reach_oracle(&cnf, &g), cfl_reach_matrix_oracle(&cnf, &g));
            }
        }
    }

    #[test]
    fn rpq_oracle_matches_walks() {
        let g = load_graph(FIG1, false).unwrap();
        let re = parse_regex("a b*").unwrap();
        let nfa = ThompsonNfa::new(&re);
        let mut expected = BTreeSet::new();
        for w in enumerate_walks(&g, 6) {
            if nfa.accepts(&w.word()) {
                expected.insert((w.start(), w.end()));
            }
        }
        assert_eq!(rpq_bfs_oracle(&re, &g), expected);
        assert_eq!(expected, BTreeSet::from([(0, 1), (1, 0)]));
        assert!(rpq_bfs_oracle(&RegexAst::Empty, &g).is_empty());
    }

    #[test]
    fn thompson_matches_box() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        for _ in 0..30 {
            let (_, re) = random_template_regex(&mut rng, &["a", "b"]);
            let nfa = ThompsonNfa::new(&re);
            let b = kronpath::regex_to_box(&re);
            for w in [vec![], vec!["a"], vec!["a", "b"], vec!["b", "a", "a"], vec!["a", "b", "a", "b"]] {
                assert_eq!(nfa.accepts(&w), b.accepts(&w), "{re} {w:?}");
            }
        }
    }

    #[test]
    fn warshall_small() {
        let c = warshall(3, [(0, 1), (1, 2)]);
        assert_eq!(c, BTreeSet::from([(0, 1), (0, 2), (1, 2)]));
        assert_eq!(warshall(2, [(0, 1), (1, 0)]).len(), 4);
    }

    #[test]
    fn walk_counts() {
        let g = load_graph(FIG1, false).unwrap();
        // 2 empty walks, 3 single edges, then 0a1, 1a0, 1b1 extended.
        let walks = enumerate_walks(&g, 2);
        assert_eq!(walks.iter().filter(|w| w.is_empty()).count(), 2);
        assert_eq!(walks.iter().filter(|w| w.len() == 1).count(), 3);
        assert_eq!(walks.iter().filter(|w| w.len() == 2).count(), 5);
    }

    #[test]
    fn full_recompute_on_example() {
        let g = load_graph(FIG1, false).unwrap();
        let rsm = kronpath::grammar_to_rsm(&parse_grammar("S -> a S b | a b").unwrap());
        let (m3, graph) = full_recompute_index(&rsm, &g);
        assert_eq!(m3.nnz(), 6);
        assert_eq!(graph.get("S").unwrap().iter().collect::<Vec<_>>(), [(0, 1), (1, 1)]);
    }
}
