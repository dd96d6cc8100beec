use std::collections::{BTreeMap, BTreeSet};

use super::regex::{lex_line, Parser, RegexAst, Tok};
use crate::error::{Error, Result};

/// Context-free grammar whose right-hand sides are regular expressions over
/// terminals and nonterminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    nonterminals: Vec<String>,
    terminals: BTreeSet<String>,
    start: String,
    rules: BTreeMap<String, RegexAst>,
}

impl Grammar {
    /// Builds a grammar from `(lhs, body)` rules; bodies sharing a left-hand
    /// side become alternatives. Every left-hand side is a nonterminal, every
    /// other symbol a terminal.
    pub fn from_rules<I>(rules: I, start: Option<&str>) -> Result<Self>
    where
        I: IntoIterator<Item = (String, RegexAst)>,
    {
        let mut nonterminals: Vec<String> = Vec::new();
        let mut bodies: BTreeMap<String, Vec<RegexAst>> = BTreeMap::new();
        for (lhs, body) in rules {
            if !bodies.contains_key(&lhs) {
                nonterminals.push(lhs.clone());
            }
            bodies.entry(lhs).or_default().push(body);
        }
        if nonterminals.is_empty() {
            return Err(Error::syntax(1, 1, "grammar has no rules"));
        }
        let mut terminals = BTreeSet::new();
        for body in bodies.values().flatten() {
            body.for_each_symbol(&mut |s| {
                if !bodies.contains_key(s) {
                    terminals.insert(s.to_owned());
                }
            });
        }
        let start = match start {
            Some(s) if bodies.contains_key(s) => s.to_owned(),
            Some(s) => return Err(Error::UnknownNonterminal(s.to_owned())),
            None => nonterminals[0].clone(),
        };
        let rules = bodies
            .into_iter()
            .map(|(lhs, mut alts)| {
                let body = if alts.len() == 1 {
                    alts.pop().expect("one body")
                } else {
                    RegexAst::Alt(alts)
                };
                (lhs, body)
            })
            .collect();
        Ok(Grammar {
            nonterminals,
            terminals,
            start,
            rules,
        })
    }

    /// Single-nonterminal grammar `start -> regex`. The nonterminal is renamed
    /// with trailing `'` until it does not clash with a symbol of the regex.
    pub fn from_regex(regex: RegexAst, start: &str) -> Self {
        let mut used = BTreeSet::new();
        regex.for_each_symbol(&mut |s| {
            used.insert(s.to_owned());
        });
        let mut name = start.to_owned();
        while used.contains(&name) {
            name.push('\'');
        }
        Grammar::from_rules([(name, regex)], None).expect("one rule")
    }

    /// Nonterminals in order of first definition.
    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &BTreeSet<String> {
        &self.terminals
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn rule(&self, nonterminal: &str) -> Option<&RegexAst> {
        self.rules.get(nonterminal)
    }

    pub fn is_nonterminal(&self, symbol: &str) -> bool {
        self.rules.contains_key(symbol)
    }

    pub fn with_start(mut self, start: &str) -> Result<Self> {
        if !self.is_nonterminal(start) {
            return Err(Error::UnknownNonterminal(start.to_owned()));
        }
        self.start = start.to_owned();
        Ok(self)
    }

    /// Total number of regex nodes over all rule bodies.
    pub fn size(&self) -> usize {
        self.rules.values().map(RegexAst::size).sum()
    }
}

/// Parses grammar text: one `Lhs -> body` rule per line, where a line
/// starting with `|` adds an alternative to the previous rule.
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut rules: Vec<(String, RegexAst)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = lex_line(line, line_no, true)?;
        let end = line.chars().count() + 1;
        let Some(first) = toks.first() else { continue };
        let (lhs, body) = match (&first.tok, toks.get(1).map(|t| &t.tok)) {
            (Tok::Sym(lhs), Some(Tok::Arrow)) => (lhs.clone(), &toks[2..]),
            (Tok::Bar, _) => match rules.last() {
                Some((lhs, _)) => (lhs.clone(), &toks[1..]),
                None => return Err(Error::syntax(line_no, first.column, "continuation `|` before any rule")),
            },
            (Tok::Sym(_), _) => {
                let column = toks.get(1).map_or(end, |t| t.column);
                return Err(Error::syntax(line_no, column, "expected `->`"));
            }
            _ => return Err(Error::syntax(line_no, first.column, "expected a nonterminal")),
        };
        if body.is_empty() {
            return Err(Error::syntax(line_no, end, "empty right-hand side (write `()` for ε)"));
        }
        let ast = Parser::new(body, line_no, end).parse_all()?;
        rules.push((lhs, ast));
    }
    if rules.is_empty() {
        return Err(Error::syntax(1, 1, "grammar has no rules"));
    }
    Grammar::from_rules(rules, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn same_generation_grammar() {
        let g = parse_grammar("S -> a S b | a b").unwrap();
        assert_eq!(g.nonterminals(), ["S"]);
        assert_eq!(g.terminals(), &set(&["a", "b"]));
        assert_eq!(g.start(), "S");
        match g.rule("S").unwrap() {
            RegexAst::Alt(arms) => assert_eq!(arms.len(), 2),
            other => panic!("expected alternation, got {other:?}"),
        }
    }

    #[test]
    fn epsilon_rule() {
        let g = parse_grammar("S -> ()").unwrap();
        assert_eq!(g.rule("S"), Some(&RegexAst::Epsilon));
        assert!(g.terminals().is_empty());
    }

    #[test]
    fn memory_alias_grammar() {
        let g = parse_grammar("S -> d_r V d\nV -> (S? a_r)* S? (a S?)*").unwrap();
        assert_eq!(g.nonterminals(), ["S", "V"]);
        assert_eq!(g.terminals(), &set(&["a", "a_r", "d", "d_r"]));
    }

    #[test]
    fn comments_continuations_and_repeated_lhs() {
        let text = "# same generation\nS -> x S y   # recursive\n   | x y\nT -> S\nT -> z\n";
        let g = parse_grammar(text).unwrap();
        assert_eq!(g.nonterminals(), ["S", "T"]);
        assert_eq!(g.terminals(), &set(&["x", "y", "z"]));
        assert!(matches!(g.rule("T"), Some(RegexAst::Alt(a)) if a.len() == 2));
        assert!(matches!(g.rule("S"), Some(RegexAst::Alt(a)) if a.len() == 2));
    }

    #[test]
    fn start_override() {
        let g = parse_grammar("S -> T\nT -> t").unwrap().with_start("T").unwrap();
        assert_eq!(g.start(), "T");
        assert!(matches!(
            parse_grammar("S -> a").unwrap().with_start("X"),
            Err(Error::UnknownNonterminal(_))
        ));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_grammar(""), Err(Error::Syntax { .. })));
        assert!(matches!(parse_grammar("# nothing\n"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_grammar("S a b"), Err(Error::Syntax { line: 1, column: 3, .. })));
        assert!(matches!(parse_grammar("S -> a\nS ->"), Err(Error::Syntax { line: 2, column: 5, .. })));
        assert!(matches!(parse_grammar("S -> a \\x"), Err(Error::Syntax { line: 1, column: 8, .. })));
        assert!(matches!(parse_grammar("S -> (a"), Err(Error::Syntax { line: 1, column: 6, .. })));
        assert!(matches!(parse_grammar("| a"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn regex_grammar_avoids_name_clash() {
        let g = Grammar::from_regex(super::super::parse_regex("S a").unwrap(), "S");
        assert_eq!(g.start(), "S'");
        assert!(g.terminals().contains("S"));
    }
}
