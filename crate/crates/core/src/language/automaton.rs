//! ε-free finite automata built from regular expressions.
//!
//! The position (Glushkov) construction yields one state per symbol
//! occurrence plus a start state and never needs ε-moves. The result is then
//! shrunk by merging states with equal left languages (backward bisimulation)
//! and equal right languages (forward bisimulation), which keeps the automaton
//! nondeterministic but small; `ab*` becomes two states and `aSb | ab` the
//! familiar four-state box.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::regex::RegexAst;

// outgoing (label, class) pairs of a state
type Signature<'a> = BTreeSet<(&'a str, usize)>;

/// ε-free nondeterministic automaton with a single start state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    states: usize,
    start: usize,
    finals: BTreeSet<usize>,
    transitions: BTreeSet<(usize, String, usize)>,
}

impl Automaton {
    pub fn new(
        states: usize,
        start: usize,
        finals: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, String, usize)>,
    ) -> Self {
        let finals: BTreeSet<usize> = finals.into_iter().collect();
        let transitions: BTreeSet<_> = transitions.into_iter().collect();
        assert!(start < states, "start state out of range");
        assert!(finals.iter().all(|&f| f < states), "final state out of range");
        assert!(
            transitions.iter().all(|(p, _, q)| *p < states && *q < states),
            "transition endpoint out of range"
        );
        Automaton {
            states,
            start,
            finals,
            transitions,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    /// Transitions as `(from, label, to)`, sorted.
    pub fn transitions(&self) -> &BTreeSet<(usize, String, usize)> {
        &self.transitions
    }

    /// Whether the automaton accepts `word`.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut current = BTreeSet::from([self.start]);
        for sym in word {
            let sym = sym.as_ref();
            current = self
                .transitions
                .iter()
                .filter(|(p, l, _)| l == sym && current.contains(p))
                .map(|(_, _, q)| *q)
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.finals.contains(q))
    }

    /// Subset construction followed by minimization.
    pub fn determinize(&self) -> Automaton {
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let mut transitions = Vec::new();
        let mut finals = Vec::new();
        let first = BTreeSet::from([self.start]);
        index.insert(first.clone(), 0);
        queue.push_back(first);
        while let Some(set) = queue.pop_front() {
            let id = index[&set];
            if set.iter().any(|q| self.finals.contains(q)) {
                finals.push(id);
            }
            let mut by_label: BTreeMap<&str, BTreeSet<usize>> = BTreeMap::new();
            for (p, l, q) in &self.transitions {
                if set.contains(p) {
                    by_label.entry(l.as_str()).or_default().insert(*q);
                }
            }
            for (label, target) in by_label {
                let next = index.len();
                let tid = *index.entry(target.clone()).or_insert_with(|| {
                    queue.push_back(target);
                    next
                });
                transitions.push((id, label.to_owned(), tid));
            }
        }
        Automaton::new(index.len(), 0, finals, transitions).reduce()
    }

    /// Drops useless states, merges bisimilar states, renumbers canonically.
    pub fn reduce(&self) -> Automaton {
        let mut a = self.trim();
        loop {
            let before = a.states;
            a = a.merge(&a.backward_classes());
            a = a.merge(&a.forward_classes());
            if a.states == before {
                break;
            }
        }
        a.canonical()
    }

    /// Removes states that are unreachable from the start or cannot reach a
    /// final state; the start state is always kept.
    fn trim(&self) -> Automaton {
        let forward = self.reach(self.start, false);
        let mut backward = vec![false; self.states];
        for &f in &self.finals {
            for (q, hit) in self.reach(f, true).into_iter().enumerate() {
                backward[q] |= hit;
            }
        }
        let keep: Vec<bool> = (0..self.states)
            .map(|q| q == self.start || (forward[q] && backward[q]))
            .collect();
        let mut map = vec![usize::MAX; self.states];
        let mut next = 0;
        for q in 0..self.states {
            if keep[q] {
                map[q] = next;
                next += 1;
            }
        }
        Automaton {
            states: next,
            start: map[self.start],
            finals: self.finals.iter().filter(|&&f| keep[f]).map(|&f| map[f]).collect(),
            transitions: self
                .transitions
                .iter()
                .filter(|(p, _, q)| keep[*p] && keep[*q])
                .map(|(p, l, q)| (map[*p], l.clone(), map[*q]))
                .collect(),
        }
    }

    fn reach(&self, from: usize, reversed: bool) -> Vec<bool> {
        let mut seen = vec![false; self.states];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(q) = stack.pop() {
            for (p, _, r) in &self.transitions {
                let (src, dst) = if reversed { (*r, *p) } else { (*p, *r) };
                if src == q && !seen[dst] {
                    seen[dst] = true;
                    stack.push(dst);
                }
            }
        }
        seen
    }

    /// Coarsest partition where equivalent states agree on finality and on the
    /// classes reachable under each label.
    fn forward_classes(&self) -> Vec<usize> {
        let initial: Vec<usize> = (0..self.states).map(|q| self.finals.contains(&q) as usize).collect();
        self.refine(initial, false)
    }

    /// Same on the reversed automaton, with the start state as the only initial state.
    fn backward_classes(&self) -> Vec<usize> {
        let initial: Vec<usize> = (0..self.states).map(|q| (q == self.start) as usize).collect();
        self.refine(initial, true)
    }

    fn refine(&self, mut class: Vec<usize>, reversed: bool) -> Vec<usize> {
        let mut count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut signatures: Vec<Signature> = vec![BTreeSet::new(); self.states];
            for (p, l, q) in &self.transitions {
                let (src, dst) = if reversed { (*q, *p) } else { (*p, *q) };
                signatures[src].insert((l.as_str(), class[dst]));
            }
            let mut ids: BTreeMap<(usize, &Signature), usize> = BTreeMap::new();
            let next: Vec<usize> = (0..self.states)
                .map(|q| {
                    let n = ids.len();
                    *ids.entry((class[q], &signatures[q])).or_insert(n)
                })
                .collect();
            let new_count = ids.len();
            class = next;
            if new_count == count {
                return class;
            }
            count = new_count;
        }
    }

    fn merge(&self, class: &[usize]) -> Automaton {
        let states = class.iter().max().map_or(0, |&m| m + 1);
        Automaton {
            states,
            start: class[self.start],
            finals: self.finals.iter().map(|&f| class[f]).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|(p, l, q)| (class[*p], l.clone(), class[*q]))
                .collect(),
        }
    }

    /// Renumbers states in breadth-first order from the start, visiting
    /// successors by `(label, old target)`.
    fn canonical(&self) -> Automaton {
        let mut map = vec![usize::MAX; self.states];
        let mut queue = VecDeque::from([self.start]);
        map[self.start] = 0;
        let mut next = 1;
        while let Some(q) = queue.pop_front() {
            for (p, _, r) in &self.transitions {
                if *p == q && map[*r] == usize::MAX {
                    map[*r] = next;
                    next += 1;
                    queue.push_back(*r);
                }
            }
        }
        Automaton {
            states: next,
            start: 0,
            finals: self.finals.iter().filter(|&&f| map[f] != usize::MAX).map(|&f| map[f]).collect(),
            transitions: self
                .transitions
                .iter()
                .filter(|(p, _, _)| map[*p] != usize::MAX)
                .map(|(p, l, q)| (map[*p], l.clone(), map[*q]))
                .collect(),
        }
    }
}

struct Positions<'a> {
    symbols: Vec<&'a str>,
    follow: Vec<BTreeSet<usize>>,
}

/// `(nullable, first, last)` of a subexpression; positions are 1-based.
type Summary = (bool, BTreeSet<usize>, BTreeSet<usize>);

impl<'a> Positions<'a> {
    fn visit(&mut self, ast: &'a RegexAst) -> Summary {
        match ast {
            RegexAst::Empty => (false, BTreeSet::new(), BTreeSet::new()),
            RegexAst::Epsilon => (true, BTreeSet::new(), BTreeSet::new()),
            RegexAst::Symbol(s) => {
                self.symbols.push(s);
                self.follow.push(BTreeSet::new());
                let p = self.symbols.len();
                (false, BTreeSet::from([p]), BTreeSet::from([p]))
            }
            RegexAst::Alt(xs) => {
                let mut out: Summary = (false, BTreeSet::new(), BTreeSet::new());
                for x in xs {
                    let (n, f, l) = self.visit(x);
                    out.0 |= n;
                    out.1.extend(f);
                    out.2.extend(l);
                }
                out
            }
            RegexAst::Concat(xs) => {
                let mut out: Summary = (true, BTreeSet::new(), BTreeSet::new());
                for x in xs {
                    let (n, f, l) = self.visit(x);
                    for &p in &out.2 {
                        self.follow[p - 1].extend(f.iter().copied());
                    }
                    if out.0 {
                        out.1.extend(f.iter().copied());
                    }
                    if n {
                        out.2.extend(l);
                    } else {
                        out.2 = l;
                    }
                    out.0 &= n;
                }
                out
            }
            RegexAst::Star(x) | RegexAst::Plus(x) => {
                let (n, f, l) = self.visit(x);
                for &p in &l {
                    self.follow[p - 1].extend(f.iter().copied());
                }
                (n || matches!(ast, RegexAst::Star(_)), f, l)
            }
            RegexAst::Optional(x) => {
                let (_, f, l) = self.visit(x);
                (true, f, l)
            }
        }
    }
}

/// Position automaton of `ast` without reduction: state 0 is the start, state
/// `p` is entered by reading the `p`-th symbol occurrence.
pub fn glushkov(ast: &RegexAst) -> Automaton {
    let mut pos = Positions {
        symbols: Vec::new(),
        follow: Vec::new(),
    };
    let (nullable, first, last) = pos.visit(ast);
    let mut transitions = BTreeSet::new();
    for &p in &first {
        transitions.insert((0, pos.symbols[p - 1].to_owned(), p));
    }
    for (i, follow) in pos.follow.iter().enumerate() {
        for &q in follow {
            transitions.insert((i + 1, pos.symbols[q - 1].to_owned(), q));
        }
    }
    let mut finals = last;
    if nullable {
        finals.insert(0);
    }
    Automaton::new(pos.symbols.len() + 1, 0, finals, transitions)
}

/// ε-free automaton for `ast`: the reduced position automaton.
pub fn regex_to_box(ast: &RegexAst) -> Automaton {
    glushkov(ast).reduce()
}
