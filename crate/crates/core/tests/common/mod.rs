#![allow(dead_code)]

use kronpath::{grammar_to_rsm, Grammar, LabeledGraph, Rsm};
use kronpath_oracles::{random_graph, test_grammars};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const FIG1: &str = "0 a 1\n1 a 0\n1 b 1\n";
pub const G1: &str = "S -> a S b | a b";

/// A small random context-free instance.
pub struct Instance {
    pub grammar_name: &'static str,
    pub grammar: Grammar,
    pub rsm: Rsm,
    pub graph: LabeledGraph,
}

/// `count` instances with at most 8 vertices, 20 edges and 2 or 3 terminals,
/// cycling through the test grammars.
pub fn cfpq_instances(count: usize, seed: u64) -> Vec<Instance> {
    let grammars = test_grammars();
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let (grammar_name, grammar) = grammars[i % grammars.len()].clone();
            let n = rng.gen_range(1..=8);
            let edges = rng.gen_range(0..=20);
            let labels: &[&str] = if rng.gen_bool(0.5) { &["a", "b"] } else { &["a", "b", "c"] };
            Instance {
                grammar_name,
                rsm: grammar_to_rsm(&grammar),
                grammar,
                graph: random_graph(&mut rng, n, edges, labels),
            }
        })
        .collect()
}
