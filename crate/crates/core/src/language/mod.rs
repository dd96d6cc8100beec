//! Query languages: regular expressions, EBNF-style grammars and the
//! recursive state machines built from them.

mod automaton;
mod grammar;
mod regex;
mod rsm;

pub use automaton::{glushkov, regex_to_box, Automaton};
pub use grammar::{parse_grammar, Grammar};
pub use regex::{parse_regex, RegexAst};
pub use rsm::{grammar_to_rsm, grammar_to_rsm_with, rsm_simulate, Rsm, RsmBox, RsmOptions};
