//! Benchmark query templates and the built-in context-free queries.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::language::{parse_grammar, parse_regex, Grammar, RegexAst};

/// A regular query over placeholder symbols `a`..`f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryTemplate {
    pub name: &'static str,
    pub pattern: RegexAst,
}

const TEMPLATES: [(&str, &str); 28] = [
    ("Q1", "a*"),
    ("Q2", "a b*"),
    ("Q3", "a b* c*"),
    ("Q4^2", "(a | b)*"),
    ("Q4^3", "(a | b | c)*"),
    ("Q4^4", "(a | b | c | d)*"),
    ("Q4^5", "(a | b | c | d | e)*"),
    ("Q5", "a b* c"),
    ("Q6", "a* b*"),
    ("Q7", "a b c*"),
    ("Q8", "a? b*"),
    ("Q9^2", "(a | b)+"),
    ("Q9^3", "(a | b | c)+"),
    ("Q9^4", "(a | b | c | d)+"),
    ("Q9^5", "(a | b | c | d | e)+"),
    ("Q10^2", "(a | b) c*"),
    ("Q10^3", "(a | b | c) d*"),
    ("Q10^4", "(a | b | c | d) e*"),
    ("Q10^5", "(a | b | c | d | e) f*"),
    ("Q11^2", "a b"),
    ("Q11^3", "a b c"),
    ("Q11^4", "a b c d"),
    ("Q11^5", "a b c d f"),
    ("Q12", "(a b)+ | (c d)+"),
    ("Q13", "(a (b c)*)+ | (d f)+"),
    ("Q14", "(a b (c d)*)+ (e | f)*"),
    ("Q15", "(a | b)+ (c | d)+"),
    ("Q16", "a b (c | d | e)"),
];

/// All templates in table order.
pub fn templates() -> Vec<QueryTemplate> {
    TEMPLATES
        .iter()
        .map(|&(name, src)| QueryTemplate {
            name,
            pattern: parse_regex(src).expect("template patterns are valid"),
        })
        .collect()
}

/// Looks a template up by name, e.g. `Q4^2`.
pub fn template(name: &str) -> Option<QueryTemplate> {
    templates().into_iter().find(|t| t.name == name)
}

impl QueryTemplate {
    /// Distinct placeholders in alphabetical order.
    pub fn placeholders(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        self.pattern.for_each_symbol(&mut |s| {
            set.insert(s.to_owned());
        });
        set.into_iter().collect()
    }

    pub fn arity(&self) -> usize {
        self.placeholders().len()
    }

    /// Replaces the `j`-th placeholder by `labels[j]`.
    pub fn instantiate<S: AsRef<str>>(&self, labels: &[S]) -> Result<RegexAst> {
        let ph = self.placeholders();
        if labels.len() < ph.len() {
            return Err(Error::TooLarge(format!(
                "template {} needs {} labels, got {}",
                self.name,
                ph.len(),
                labels.len()
            )));
        }
        Ok(self.pattern.map_symbols(&|s| {
            let j = ph.iter().position(|p| p == s).expect("placeholder");
            labels[j].as_ref().to_owned()
        }))
    }

    /// The `i`-th instance over labels ranked by frequency: placeholder `j`
    /// takes `ranked[(i + j) % ranked.len()]`. `None` if there are fewer
    /// labels than placeholders.
    pub fn instance<S: AsRef<str>>(&self, ranked: &[S], i: usize) -> Option<RegexAst> {
        let arity = self.arity();
        if arity > ranked.len() {
            return None;
        }
        let chosen: Vec<&str> = (0..arity).map(|j| ranked[(i + j) % ranked.len()].as_ref()).collect();
        self.instantiate(&chosen).ok()
    }
}

/// Fixed context-free queries over RDF-style relations; `x_r` is the inverse of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinGrammar {
    G1,
    G2,
    Geo,
    Ma,
}

impl BuiltinGrammar {
    pub const ALL: [BuiltinGrammar; 4] = [Self::G1, Self::G2, Self::Geo, Self::Ma];

    pub fn name(self) -> &'static str {
        match self {
            Self::G1 => "g1",
            Self::G2 => "g2",
            Self::Geo => "geo",
            Self::Ma => "ma",
        }
    }

    pub fn source(self) -> &'static str {
        match self {
            Self::G1 => {
                "S -> subClassOf_r S subClassOf | type_r S type\n  | subClassOf_r subClassOf | type_r type\n"
            }
            Self::G2 => "S -> subClassOf_r S subClassOf | subClassOf\n",
            Self::Geo => {
                "S -> broaderTransitive S broaderTransitive_r\n  | broaderTransitive broaderTransitive_r\n"
            }
            Self::Ma => "S -> d_r V d\nV -> (S? a_r)* S? (a S?)*\n",
        }
    }

    pub fn grammar(self) -> Grammar {
        parse_grammar(self.source()).expect("built-in grammars are valid")
    }
}

impl fmt::Display for BuiltinGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinGrammar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSymbol(s.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_templates_parse_with_expected_arity() {
        let ts = templates();
        assert_eq!(ts.len(), 28);
        let names: BTreeSet<_> = ts.iter().map(|t| t.name).collect();
        assert_eq!(names.len(), 28);
        let arity = |n: &str| template(n).unwrap().arity();
        assert_eq!(arity("Q1"), 1);
        assert_eq!(arity("Q4^5"), 5);
        assert_eq!(arity("Q10^5"), 6);
        assert_eq!(arity("Q11^5"), 5);
        assert_eq!(arity("Q13"), 5);
        assert_eq!(arity("Q14"), 6);
        for t in &ts {
            if let Some((_, k)) = t.name.split_once('^') {
                let k: usize = k.parse().unwrap();
                assert!(t.arity() == k || t.arity() == k + 1, "{}", t.name);
            }
        }
    }

    #[test]
    fn instantiation_round_robin() {
        let t = template("Q2").unwrap();
        let labels = ["p", "q", "r"];
        assert_eq!(t.instance(&labels, 0).unwrap().to_string(), "p q*");
        assert_eq!(t.instance(&labels, 2).unwrap().to_string(), "r p*");
        assert!(template("Q4^5").unwrap().instance(&labels, 0).is_none());
        let q11 = template("Q11^5").unwrap().instantiate(&["1", "2", "3", "4", "5"]).unwrap();
        assert_eq!(q11.to_string(), "1 2 3 4 5");
    }

    #[test]
    fn builtin_grammars() {
        for g in BuiltinGrammar::ALL {
            let gr = g.grammar();
            assert_eq!(gr.start(), "S");
            assert_eq!(g.name().parse::<BuiltinGrammar>().unwrap(), g);
        }
        let g1 = BuiltinGrammar::G1.grammar();
        let t: Vec<_> = g1.terminals().iter().cloned().collect();
        assert_eq!(t, ["subClassOf", "subClassOf_r", "type", "type_r"]);
        assert_eq!(BuiltinGrammar::Ma.grammar().nonterminals(), ["S", "V"]);
        assert!("nope".parse::<BuiltinGrammar>().is_err());
    }
}
