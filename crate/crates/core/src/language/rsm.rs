use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use super::automaton::{regex_to_box, Automaton};
use super::grammar::Grammar;
use crate::bitset::BitSet;
use crate::boolmat::MatrixSet;
use crate::error::{Error, Result};

/// Component machine of one nonterminal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsmBox {
    pub nonterminal: String,
    pub start: usize,
    pub finals: BTreeSet<usize>,
    pub states: Range<usize>,
}

/// Recursive state machine: one box per nonterminal over globally numbered
/// states, with transitions stored as one Boolean matrix per symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rsm {
    state_count: usize,
    boxes: Vec<RsmBox>,
    transitions: MatrixSet,
    start_nonterminal: String,
    terminals: BTreeSet<String>,
    // box index per state, for states that start a box
    starting: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RsmOptions {
    /// Determinize and minimize every box.
    pub determinize: bool,
}

impl Rsm {
    /// Assembles a machine from its parts, validating every structural invariant.
    pub fn from_parts(
        boxes: Vec<RsmBox>,
        transitions: MatrixSet,
        start_nonterminal: &str,
        terminals: BTreeSet<String>,
    ) -> Result<Rsm> {
        let state_count = transitions.dim();
        let invalid = Error::InvalidMachine;
        let mut owner = vec![None; state_count];
        let mut names = BTreeSet::new();
        for (b, bx) in boxes.iter().enumerate() {
            if !names.insert(bx.nonterminal.as_str()) {
                return Err(invalid(format!("duplicate box `{}`", bx.nonterminal)));
            }
            if bx.states.end > state_count || bx.states.is_empty() {
                return Err(invalid(format!("box `{}` has an invalid state range", bx.nonterminal)));
            }
            if !bx.states.contains(&bx.start) || !bx.finals.iter().all(|f| bx.states.contains(f)) {
                return Err(invalid(format!("box `{}` has states outside its range", bx.nonterminal)));
            }
            for q in bx.states.clone() {
                if owner[q].replace(b).is_some() {
                    return Err(invalid(format!("box `{}` overlaps another box", bx.nonterminal)));
                }
            }
            if terminals.contains(&bx.nonterminal) {
                return Err(invalid(format!("`{}` is both terminal and nonterminal", bx.nonterminal)));
            }
        }
        if !names.contains(start_nonterminal) {
            return Err(Error::UnknownNonterminal(start_nonterminal.to_owned()));
        }
        for (label, m) in transitions.iter() {
            if !names.contains(label) && !terminals.contains(label) {
                return Err(Error::UnknownSymbol(label.to_owned()));
            }
            for (p, q) in m.iter() {
                if owner[p].is_none() || owner[p] != owner[q] {
                    return Err(invalid(format!("transition {p} -{label}-> {q} crosses boxes")));
                }
            }
        }
        let mut starting = vec![None; state_count];
        for (b, bx) in boxes.iter().enumerate() {
            starting[bx.start] = Some(b);
        }
        Ok(Rsm {
            state_count,
            boxes,
            transitions,
            start_nonterminal: start_nonterminal.to_owned(),
            terminals,
            starting,
        })
    }

    /// Total number of states; the side of every transition matrix.
    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn boxes(&self) -> &[RsmBox] {
        &self.boxes
    }

    pub fn box_of(&self, nonterminal: &str) -> Option<&RsmBox> {
        self.boxes.iter().find(|b| b.nonterminal == nonterminal)
    }

    pub fn transitions(&self) -> &MatrixSet {
        &self.transitions
    }

    pub fn start_nonterminal(&self) -> &str {
        &self.start_nonterminal
    }

    pub fn terminals(&self) -> &BTreeSet<String> {
        &self.terminals
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = &str> {
        self.boxes.iter().map(|b| b.nonterminal.as_str())
    }

    pub fn is_nonterminal(&self, symbol: &str) -> bool {
        self.box_of(symbol).is_some()
    }

    /// Box whose start state is `state`, if any.
    pub fn box_starting_at(&self, state: usize) -> Option<&RsmBox> {
        self.starting.get(state).copied().flatten().map(|b| &self.boxes[b])
    }

    /// Position in [`Rsm::boxes`] of the box whose start state is `state`.
    pub fn box_index_starting_at(&self, state: usize) -> Option<usize> {
        self.starting.get(state).copied().flatten()
    }

    /// Nonterminals whose box starts at `start` and has `end` among its finals.
    pub fn nonterminals_between(&self, start: usize, end: usize) -> impl Iterator<Item = &str> {
        self.box_starting_at(start)
            .filter(|b| b.finals.contains(&end))
            .map(|b| b.nonterminal.as_str())
            .into_iter()
    }

    /// Whether the machine accepts `word` from its start nonterminal.
    ///
    /// Computes, for every state and input position, the set of positions at
    /// which a run from that state can stop in a final state of the same box,
    /// as a least fixpoint so that left recursion and nullable calls are
    /// handled. Meant for testing.
    pub fn simulate<S: AsRef<str>>(&self, word: &[S]) -> Result<bool> {
        for sym in word {
            let sym = sym.as_ref();
            if !self.terminals.contains(sym) && !self.is_nonterminal(sym) {
                return Err(Error::UnknownSymbol(sym.to_owned()));
            }
        }
        let len = word.len();
        let edges: Vec<(usize, &str, usize)> = self
            .transitions
            .iter()
            .flat_map(|(l, m)| m.iter().map(move |(p, q)| (p, l, q)))
            .collect();
        let calls: BTreeMap<&str, usize> = self.boxes.iter().map(|b| (b.nonterminal.as_str(), b.start)).collect();
        let finals: BTreeSet<usize> = self.boxes.iter().flat_map(|b| b.finals.iter().copied()).collect();

        // ends[q * (len + 1) + i]
        let at = |q: usize, i: usize| q * (len + 1) + i;
        let mut ends = vec![BitSet::new(); self.state_count * (len + 1)];
        for &f in &finals {
            for i in 0..=len {
                ends[at(f, i)].insert(i);
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for &(p, label, q) in &edges {
                for i in 0..=len {
                    let mut gained = BitSet::new();
                    if i < len && word[i].as_ref() == label {
                        gained.union_with(&ends[at(q, i + 1)]);
                    }
                    if let Some(&call) = calls.get(label) {
                        for mid in ends[at(call, i)].clone().iter() {
                            gained.union_with(&ends[at(q, mid)]);
                        }
                    }
                    if ends[at(p, i)].union_with(&gained) > 0 {
                        changed = true;
                    }
                }
            }
        }
        let start = self.box_of(&self.start_nonterminal).expect("validated").start;
        Ok(ends[at(start, 0)].contains(len))
    }
}

/// Builds a machine with one box per nonterminal.
pub fn grammar_to_rsm(grammar: &Grammar) -> Rsm {
    grammar_to_rsm_with(grammar, RsmOptions::default())
}

pub fn grammar_to_rsm_with(grammar: &Grammar, options: RsmOptions) -> Rsm {
    let automata: Vec<(String, Automaton)> = grammar
        .nonterminals()
        .iter()
        .map(|nt| {
            let body = grammar.rule(nt).expect("every nonterminal has a rule");
            let mut a = regex_to_box(body);
            if options.determinize {
                a = a.determinize();
            }
            (nt.clone(), a)
        })
        .collect();
    let state_count = automata.iter().map(|(_, a)| a.state_count()).sum();
    let mut transitions = MatrixSet::new(state_count);
    let mut boxes = Vec::with_capacity(automata.len());
    let mut offset = 0;
    for (nt, a) in automata {
        for (p, label, q) in a.transitions() {
            transitions.entry(label).set_unchecked(offset + p, offset + q);
        }
        boxes.push(RsmBox {
            nonterminal: nt,
            start: offset + a.start(),
            finals: a.finals().iter().map(|f| offset + f).collect(),
            states: offset..offset + a.state_count(),
        });
        offset += a.state_count();
    }
    Rsm::from_parts(boxes, transitions, grammar.start(), grammar.terminals().clone())
        .expect("construction upholds box invariants")
}

/// Runs `rsm` on `word`; see [`Rsm::simulate`].
pub fn rsm_simulate<S: AsRef<str>>(rsm: &Rsm, word: &[S]) -> Result<bool> {
    rsm.simulate(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::parse_grammar;

    fn g1() -> Rsm {
        grammar_to_rsm(&parse_grammar("S -> a S b | a b").unwrap())
    }

    fn edges(rsm: &Rsm) -> Vec<(usize, String, usize)> {
        let mut out: Vec<_> = rsm
            .transitions()
            .iter()
            .flat_map(|(l, m)| m.iter().map(move |(p, q)| (p, l.to_owned(), q)))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn same_generation_machine() {
        let r = g1();
        assert_eq!(r.state_count(), 4);
        let b = r.box_of("S").unwrap();
        assert_eq!(b.start, 0);
        assert_eq!(b.finals, BTreeSet::from([3]));
        assert_eq!(
            edges(&r),
            vec![
                (0, "a".into(), 1),
                (1, "S".into(), 2),
                (1, "b".into(), 3),
                (2, "b".into(), 3)
            ]
        );
        assert_eq!(r.nonterminals_between(0, 3).collect::<Vec<_>>(), ["S"]);
        assert_eq!(r.nonterminals_between(1, 3).count(), 0);
    }

    #[test]
    fn epsilon_box_start_is_final() {
        let r = grammar_to_rsm(&parse_grammar("S -> ()").unwrap());
        let b = r.box_of("S").unwrap();
        assert!(b.finals.contains(&b.start));
        assert!(r.simulate::<&str>(&[]).unwrap());
    }

    #[test]
    fn boxes_are_disjoint_and_sized_linearly() {
        let g = parse_grammar("S -> d_r V d\nV -> (S? a_r)* S? (a S?)*").unwrap();
        let r = grammar_to_rsm(&g);
        assert_eq!(r.boxes().len(), 2);
        let (s, v) = (r.box_of("S").unwrap(), r.box_of("V").unwrap());
        assert!(s.states.end <= v.states.start);
        assert_eq!(v.states.end, r.state_count());
        assert!(r.state_count() <= 2 * g.size() + 2);
    }

    #[test]
    fn simulate_same_generation_words() {
        let r = g1();
        assert!(r.simulate(&["a", "a", "b", "b"]).unwrap());
        assert!(r.simulate(&["a", "b"]).unwrap());
        assert!(!r.simulate::<&str>(&[]).unwrap());
        assert!(!r.simulate(&["a", "b", "b"]).unwrap());
        assert!(!r.simulate(&["a", "b", "a", "b"]).unwrap());
        assert!(matches!(r.simulate(&["c"]), Err(Error::UnknownSymbol(_))));
    }

    #[test]
    fn simulate_handles_left_recursion() {
        let r = grammar_to_rsm(&parse_grammar("S -> S a | b\n").unwrap());
        assert!(r.simulate(&["b", "a", "a"]).unwrap());
        assert!(!r.simulate(&["a", "b"]).unwrap());
        let nullable = grammar_to_rsm(&parse_grammar("S -> A A x\nA -> () | y").unwrap());
        assert!(nullable.simulate(&["x"]).unwrap());
        assert!(nullable.simulate(&["y", "x"]).unwrap());
        assert!(!nullable.simulate(&["y", "y", "y", "x"]).unwrap());
    }

    #[test]
    fn determinized_boxes_accept_the_same_words() {
        let g = parse_grammar("S -> a S b | a b | a a S").unwrap();
        let plain = grammar_to_rsm(&g);
        let det = grammar_to_rsm_with(&g, RsmOptions { determinize: true });
        for w in [vec!["a", "b"], vec!["a", "a", "a", "b"], vec!["a", "a", "b", "b"], vec!["b"]] {
            assert_eq!(plain.simulate(&w).unwrap(), det.simulate(&w).unwrap(), "{w:?}");
        }
    }
}
