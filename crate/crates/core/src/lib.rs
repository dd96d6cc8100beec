//! Context-free and regular path queries over edge-labeled graphs, evaluated
//! with Boolean Kronecker products and incrementally maintained transitive
//! closure.
//!
//! ```
//! use kronpath::{build_index, grammar_to_rsm, load_graph, parse_grammar};
//!
//! let graph = load_graph("0 a 1\n1 a 0\n1 b 1\n", false).unwrap();
//! let rsm = grammar_to_rsm(&parse_grammar("S -> a S b | a b").unwrap());
//! let index = build_index(&rsm, &graph).unwrap();
//! let pairs = index.reachable_pairs("S").unwrap();
//! assert_eq!(pairs, [("0".into(), "1".into()), ("1".into(), "1".into())]);
//! ```

mod bitset;
pub mod boolmat;
pub mod closure;
pub mod error;
pub mod graph;
pub mod index;
pub mod language;
pub mod paths;
pub mod queries;
pub mod workload;

pub use boolmat::{kron, kron_set, vec_mat_mul, BoolMatrix, BoolVector, MatrixSet};
pub use closure::DynClosure;
pub use error::{Error, Result};
pub use graph::{load_graph, load_graph_file, GraphBuilder, GraphStats, LabeledGraph};
pub use index::{build_index, build_index_observed, BuildStats, IterationReport, KronIndex};
pub use language::{
    grammar_to_rsm, grammar_to_rsm_with, parse_grammar, parse_regex, regex_to_box, rsm_simulate, Automaton, Grammar,
    RegexAst, Rsm, RsmBox, RsmOptions,
};
pub use paths::{
    gen_index_paths, get_paths, get_paths_named, word_of, Budget, GraphPath, IndexPath, PathEdge, PathExtractor,
};
pub use queries::{templates, BuiltinGrammar, QueryTemplate};
pub use workload::SyntheticSpec;
