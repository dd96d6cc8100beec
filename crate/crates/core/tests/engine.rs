mod common;

use std::collections::{BTreeSet, HashMap};

use common::{cfpq_instances, FIG1, G1};
use kronpath::{
    build_index, build_index_observed, gen_index_paths, get_paths, grammar_to_rsm, grammar_to_rsm_with,
    load_graph, parse_grammar, word_of, BuiltinGrammar, Budget, KronIndex, LabeledGraph, RsmOptions,
};
use kronpath_oracles::{cfl_reach_oracle, cyk, random_graph, to_cnf};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn pairs(idx: &KronIndex, nt: &str) -> BTreeSet<(usize, usize)> {
    idx.nonterminal_matrix(nt).unwrap().iter().collect()
}

#[test]
fn determinized_boxes_give_same_answers() {
    for inst in cfpq_instances(60, 17) {
        let plain = build_index(&inst.rsm, &inst.graph).unwrap();
        let det = build_index(
            &grammar_to_rsm_with(&inst.grammar, RsmOptions { determinize: true }),
            &inst.graph,
        )
        .unwrap();
        for nt in inst.grammar.nonterminals() {
            assert_eq!(pairs(&plain, nt), pairs(&det, nt), "{} {nt}", inst.grammar_name);
        }
    }
}

#[test]
fn every_round_but_the_last_adds_edges() {
    for inst in cfpq_instances(80, 5) {
        let mut added = Vec::new();
        let idx = build_index_observed(&inst.rsm, &inst.graph, |r| added.push(r.new_edges.len())).unwrap();
        assert_eq!(added.len(), idx.stats().iterations);
        if let Some((last, rest)) = added.split_last() {
            assert_eq!(*last, 0);
            assert!(rest.iter().all(|&c| c > 0));
        }
        // Each productive round adds at least one nonterminal edge, so the
        // rounds are bounded by the number of possible edges plus one.
        let bound = inst.grammar.nonterminals().len() * inst.graph.vertex_count().pow(2) + 1;
        assert!(idx.stats().iterations <= bound);
    }
}

fn rdf_graph(rng: &mut StdRng, labels: &[&str]) -> LabeledGraph {
    let n = rng.gen_range(2..=8);
    let edges = rng.gen_range(1..=16);
    let base = random_graph(rng, n, edges, labels);
    let mut text = String::new();
    for (u, l, v) in base.edges() {
        text.push_str(&format!("{} {l} {}\n", base.vertex_names()[u], base.vertex_names()[v]));
    }
    load_graph(&text, true).unwrap()
}

#[test]
fn builtin_grammars_match_oracle() {
    let mut rng = StdRng::seed_from_u64(42);
    let labels: [(BuiltinGrammar, &[&str]); 4] = [
        (BuiltinGrammar::G1, &["subClassOf", "type"]),
        (BuiltinGrammar::G2, &["subClassOf", "type"]),
        (BuiltinGrammar::Geo, &["broaderTransitive", "x"]),
        (BuiltinGrammar::Ma, &["a", "d"]),
    ];
    for (builtin, labels) in labels {
        let grammar = builtin.grammar();
        let cnf = to_cnf(&grammar);
        let rsm = grammar_to_rsm(&grammar);
        for _ in 0..25 {
            let g = rdf_graph(&mut rng, labels);
            let idx = build_index(&rsm, &g).unwrap();
            let expected = cfl_reach_oracle(&cnf, &g);
            for nt in grammar.nonterminals() {
                assert_eq!(pairs(&idx, nt), expected.get(nt).cloned().unwrap_or_default(), "{builtin} {nt}");
            }
        }
    }
}

fn dfs_walks(idx: &KronIndex, from: usize, to: usize, limit: usize) -> BTreeSet<Vec<usize>> {
    fn go(idx: &KronIndex, walk: &mut Vec<usize>, to: usize, limit: usize, out: &mut BTreeSet<Vec<usize>>) {
        let last = *walk.last().unwrap();
        if walk.len() > 1 && last == to {
            out.insert(walk.clone());
        }
        if walk.len() > limit {
            return;
        }
        let succ: Vec<usize> = idx.m3().row(last).iter().collect();
        for w in succ {
            walk.push(w);
            go(idx, walk, to, limit, out);
            walk.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(idx, &mut vec![from], to, limit, &mut out);
    out
}

#[test]
fn index_walks_match_dfs() {
    let mut rng = StdRng::seed_from_u64(9);
    for inst in cfpq_instances(40, 71) {
        let idx = build_index(&inst.rsm, &inst.graph).unwrap();
        let (k, n) = (idx.state_count(), idx.vertex_count());
        if n == 0 {
            continue;
        }
        for _ in 0..5 {
            let from = (rng.gen_range(0..k), rng.gen_range(0..n));
            let to = (rng.gen_range(0..k), rng.gen_range(0..n));
            let budget = Budget {
                max_word_length: 0,
                max_paths: usize::MAX,
                max_index_path_edges: 4,
            };
            let got: Vec<Vec<usize>> = gen_index_paths(&idx, from, to, &budget)
                .unwrap()
                .map(|p| p.nodes().iter().map(|&(s, v)| idx.composite(s, v)).collect())
                .collect();
            assert!(got.windows(2).all(|w| w[0].len() <= w[1].len()));
            let expected = dfs_walks(&idx, idx.composite(from.0, from.1), idx.composite(to.0, to.1), 4);
            assert_eq!(got.len(), expected.len());
            assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), expected);
        }
    }
}

#[test]
fn extracted_paths_are_derivable_walks() {
    for inst in cfpq_instances(60, 88) {
        let idx = build_index(&inst.rsm, &inst.graph).unwrap();
        let cnf = to_cnf(&inst.grammar);
        let start = inst.grammar.start();
        let budget = Budget::for_index(&idx, 5, 50);
        let mut cache: HashMap<Vec<String>, bool> = HashMap::new();
        for (x, y) in pairs(&idx, start) {
            let found: Vec<_> = get_paths(&idx, x, y, start, &budget).unwrap().collect();
            assert!(found.windows(2).all(|w| w[0].len() <= w[1].len()));
            let distinct: BTreeSet<_> = found.iter().collect();
            assert_eq!(distinct.len(), found.len());
            for p in &found {
                assert_eq!((p.start(), p.end()), (x, y));
                for e in p.edges() {
                    assert!(inst.graph.matrices().contains(&e.label, e.src, e.dst));
                }
                let w = word_of(p);
                assert!(*cache.entry(w.clone()).or_insert_with(|| cyk(&cnf, start, &w)));
            }
        }
    }
}

#[test]
fn loaded_index_answers_like_the_original() {
    let g = load_graph(FIG1, false).unwrap();
    let rsm = grammar_to_rsm(&parse_grammar(G1).unwrap());
    let idx = build_index(&rsm, &g).unwrap();
    let back = KronIndex::load_index(&idx.save_index()).unwrap();
    let budget = Budget::for_index(&idx, 12, 10);
    let a: Vec<_> = get_paths(&idx, 1, 1, "S", &budget).unwrap().collect();
    let b: Vec<_> = get_paths(&back, 1, 1, "S", &budget).unwrap().collect();
    assert_eq!(a, b);
    assert_eq!(a.len(), 3);
    assert_eq!(back.reachable_pairs("S").unwrap(), idx.reachable_pairs("S").unwrap());
}
