//! Token-level regular expressions.
//!
//! Symbols are whitespace-separated tokens; `| ( ) * + ?` are operators and
//! may touch the tokens around them (`(S? a_r)*`). `()` is the empty word,
//! the token `∅` the empty language. A backslash makes the next operator
//! character (or `\`, `#`, `-`) part of a symbol. `#` starts a comment.

use std::fmt;

use crate::error::{Error, Result};

/// Regular expression over symbol tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RegexAst {
    /// The empty language.
    Empty,
    /// The language `{ε}`.
    Epsilon,
    Symbol(String),
    Alt(Vec<RegexAst>),
    Concat(Vec<RegexAst>),
    Star(Box<RegexAst>),
    Plus(Box<RegexAst>),
    Optional(Box<RegexAst>),
}

impl RegexAst {
    pub fn symbol(s: impl Into<String>) -> Self {
        RegexAst::Symbol(s.into())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            RegexAst::Empty | RegexAst::Epsilon | RegexAst::Symbol(_) => 1,
            RegexAst::Alt(xs) | RegexAst::Concat(xs) => 1 + xs.iter().map(Self::size).sum::<usize>(),
            RegexAst::Star(x) | RegexAst::Plus(x) | RegexAst::Optional(x) => 1 + x.size(),
        }
    }

    /// Number of symbol leaves.
    pub fn positions(&self) -> usize {
        match self {
            RegexAst::Empty | RegexAst::Epsilon => 0,
            RegexAst::Symbol(_) => 1,
            RegexAst::Alt(xs) | RegexAst::Concat(xs) => xs.iter().map(Self::positions).sum(),
            RegexAst::Star(x) | RegexAst::Plus(x) | RegexAst::Optional(x) => x.positions(),
        }
    }

    /// Whether the empty word belongs to the language.
    pub fn nullable(&self) -> bool {
        match self {
            RegexAst::Empty | RegexAst::Symbol(_) => false,
            RegexAst::Epsilon | RegexAst::Star(_) | RegexAst::Optional(_) => true,
            RegexAst::Alt(xs) => xs.iter().any(Self::nullable),
            RegexAst::Concat(xs) => xs.iter().all(Self::nullable),
            RegexAst::Plus(x) => x.nullable(),
        }
    }

    /// Visits every symbol leaf left to right.
    pub fn for_each_symbol<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            RegexAst::Empty | RegexAst::Epsilon => {}
            RegexAst::Symbol(s) => f(s),
            RegexAst::Alt(xs) | RegexAst::Concat(xs) => xs.iter().for_each(|x| x.for_each_symbol(f)),
            RegexAst::Star(x) | RegexAst::Plus(x) | RegexAst::Optional(x) => x.for_each_symbol(f),
        }
    }

    /// Replaces every symbol through `f`.
    pub fn map_symbols(&self, f: &impl Fn(&str) -> String) -> RegexAst {
        match self {
            RegexAst::Empty => RegexAst::Empty,
            RegexAst::Epsilon => RegexAst::Epsilon,
            RegexAst::Symbol(s) => RegexAst::Symbol(f(s)),
            RegexAst::Alt(xs) => RegexAst::Alt(xs.iter().map(|x| x.map_symbols(f)).collect()),
            RegexAst::Concat(xs) => RegexAst::Concat(xs.iter().map(|x| x.map_symbols(f)).collect()),
            RegexAst::Star(x) => RegexAst::Star(Box::new(x.map_symbols(f))),
            RegexAst::Plus(x) => RegexAst::Plus(Box::new(x.map_symbols(f))),
            RegexAst::Optional(x) => RegexAst::Optional(Box::new(x.map_symbols(f))),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            RegexAst::Alt(xs) if xs.len() > 1 => 0,
            RegexAst::Concat(xs) if xs.len() > 1 => 1,
            _ => 2,
        }
    }
}

fn escape_symbol(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        if is_operator(ch) || matches!(ch, '\\' | '#' | '-') {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

impl fmt::Display for RegexAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, x: &RegexAst, min: u8| {
            if x.precedence() < min {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        };
        match self {
            RegexAst::Empty => write!(f, "∅"),
            RegexAst::Epsilon => write!(f, "()"),
            RegexAst::Symbol(s) => write!(f, "{}", escape_symbol(s)),
            RegexAst::Alt(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    child(f, x, 1)?;
                }
                Ok(())
            }
            RegexAst::Concat(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    child(f, x, 2)?;
                }
                Ok(())
            }
            RegexAst::Star(x) => {
                child(f, x, 2)?;
                write!(f, "*")
            }
            RegexAst::Plus(x) => {
                child(f, x, 2)?;
                write!(f, "+")
            }
            RegexAst::Optional(x) => {
                child(f, x, 2)?;
                write!(f, "?")
            }
        }
    }
}

fn is_operator(ch: char) -> bool {
    matches!(ch, '|' | '(' | ')' | '*' | '+' | '?')
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Sym(String),
    Arrow,
    Bar,
    Open,
    Close,
    Star,
    Plus,
    Question,
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub column: usize,
}

/// Splits one line into tokens; `arrows` enables the `->` token.
pub(crate) fn lex_line(line: &str, line_no: usize, arrows: bool) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let column = i + 1;
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        if ch == '#' {
            break;
        }
        if arrows && ch == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Spanned { tok: Tok::Arrow, column });
            i += 2;
            continue;
        }
        let op = match ch {
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            '*' => Some(Tok::Star),
            '+' => Some(Tok::Plus),
            '?' => Some(Tok::Question),
            _ => None,
        };
        if let Some(tok) = op {
            out.push(Spanned { tok, column });
            i += 1;
            continue;
        }
        let mut sym = String::new();
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || is_operator(c) || c == '#' {
                break;
            }
            if arrows && c == '-' && chars.get(i + 1) == Some(&'>') {
                break;
            }
            if c == '\\' {
                match chars.get(i + 1) {
                    Some(&e) if is_operator(e) || matches!(e, '\\' | '#' | '-') => {
                        sym.push(e);
                        i += 2;
                        continue;
                    }
                    Some(&e) => {
                        return Err(Error::syntax(line_no, i + 1, format!("unknown escape `\\{e}`")))
                    }
                    None => return Err(Error::syntax(line_no, i + 1, "dangling `\\` at end of line")),
                }
            }
            sym.push(c);
            i += 1;
        }
        out.push(Spanned {
            tok: Tok::Sym(sym),
            column,
        });
    }
    Ok(out)
}

/// Recursive-descent parser over a token slice.
pub(crate) struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(toks: &'a [Spanned], line: usize, end_column: usize) -> Self {
        Parser {
            toks,
            pos: 0,
            line,
            end_column,
        }
    }

    fn peek(&self) -> Option<&'a Spanned> {
        self.toks.get(self.pos)
    }

    fn column(&self) -> usize {
        self.peek().map_or(self.end_column, |t| t.column)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::syntax(self.line, self.column(), message)
    }

    /// Parses the whole slice as one expression.
    pub(crate) fn parse_all(mut self) -> Result<RegexAst> {
        let ast = self.alternation()?;
        match self.peek() {
            None => Ok(ast),
            Some(t) if t.tok == Tok::Close => Err(self.err("unbalanced `)`")),
            Some(t) => Err(self.err(format!("unexpected {:?}", t.tok))),
        }
    }

    fn alternation(&mut self) -> Result<RegexAst> {
        let mut arms = vec![self.concatenation()?];
        while matches!(self.peek(), Some(t) if t.tok == Tok::Bar) {
            self.pos += 1;
            arms.push(self.concatenation()?);
        }
        Ok(if arms.len() == 1 {
            arms.pop().expect("one arm")
        } else {
            RegexAst::Alt(arms)
        })
    }

    fn concatenation(&mut self) -> Result<RegexAst> {
        let mut items = Vec::new();
        while let Some(t) = self.peek() {
            match t.tok {
                Tok::Sym(_) | Tok::Open => items.push(self.postfix()?),
                Tok::Star | Tok::Plus | Tok::Question => {
                    return Err(self.err("dangling postfix operator"))
                }
                Tok::Arrow => return Err(self.err("unexpected `->`")),
                Tok::Bar | Tok::Close => break,
            }
        }
        match items.len() {
            0 => Err(self.err("dangling operator: expected a symbol or `(`")),
            1 => Ok(items.pop().expect("one item")),
            _ => Ok(RegexAst::Concat(items)),
        }
    }

    fn postfix(&mut self) -> Result<RegexAst> {
        let mut node = self.atom()?;
        while let Some(t) = self.peek() {
            node = match t.tok {
                Tok::Star => RegexAst::Star(Box::new(node)),
                Tok::Plus => RegexAst::Plus(Box::new(node)),
                Tok::Question => RegexAst::Optional(Box::new(node)),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<RegexAst> {
        let t = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        match &t.tok {
            Tok::Sym(s) => {
                self.pos += 1;
                Ok(if s == "∅" {
                    RegexAst::Empty
                } else {
                    RegexAst::Symbol(s.clone())
                })
            }
            Tok::Open => {
                let open = t.column;
                self.pos += 1;
                if matches!(self.peek(), Some(t) if t.tok == Tok::Close) {
                    self.pos += 1;
                    return Ok(RegexAst::Epsilon);
                }
                let inner = self.alternation()?;
                match self.peek() {
                    Some(t) if t.tok == Tok::Close => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::syntax(self.line, open, "unbalanced `(`")),
                }
            }
            other => Err(self.err(format!("unexpected {other:?}"))),
        }
    }
}

/// Parses a regular expression written on one or more lines.
pub fn parse_regex(text: &str) -> Result<RegexAst> {
    let mut toks = Vec::new();
    let mut last = (1, 1);
    for (idx, line) in text.lines().enumerate() {
        let line_toks = lex_line(line, idx + 1, false)?;
        if !line_toks.is_empty() {
            last = (idx + 1, line.chars().count() + 1);
        }
        // Columns from later lines are only used in messages; keep the line of the
        // final token for end-of-input errors.
        toks.extend(line_toks);
    }
    if toks.is_empty() {
        return Err(Error::syntax(last.0, last.1, "empty regular expression"));
    }
    Parser::new(&toks, last.0, last.1).parse_all()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> RegexAst {
        RegexAst::symbol(s)
    }

    #[test]
    fn concat_binds_looser_than_star() {
        assert_eq!(
            parse_regex("a b*").unwrap(),
            RegexAst::Concat(vec![sym("a"), RegexAst::Star(Box::new(sym("b")))])
        );
        assert_eq!(parse_regex("a").unwrap(), sym("a"));
    }

    #[test]
    fn plus_of_groups() {
        let alt = |x: &str, y: &str| RegexAst::Alt(vec![sym(x), sym(y)]);
        assert_eq!(
            parse_regex("(a | b)+ (c | d)+").unwrap(),
            RegexAst::Concat(vec![
                RegexAst::Plus(Box::new(alt("a", "b"))),
                RegexAst::Plus(Box::new(alt("c", "d"))),
            ])
        );
    }

    #[test]
    fn operators_may_touch_symbols() {
        let ast = parse_regex("(S? a_r)* S? (a S?)*").unwrap();
        assert_eq!(ast.positions(), 5);
        assert!(ast.nullable());
    }

    #[test]
    fn epsilon_and_empty_literals() {
        assert_eq!(parse_regex("()").unwrap(), RegexAst::Epsilon);
        assert_eq!(parse_regex("∅").unwrap(), RegexAst::Empty);
    }

    #[test]
    fn escapes() {
        assert_eq!(parse_regex(r"a\*b").unwrap(), sym("a*b"));
        assert!(matches!(
            parse_regex(r"a\q"),
            Err(Error::Syntax { column: 2, .. })
        ));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["(a b", "a b)", "a |", "| a", "* a", "a | | b", "", "a ( )b )"] {
            assert!(parse_regex(bad).is_err(), "{bad:?} should fail");
        }
        match parse_regex("a (b | c") {
            Err(Error::Syntax { line: 1, column: 3, message }) => assert!(message.contains("unbalanced")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for src in ["a b*", "(a | b)+ (c | d)+", "(a b (c d)*)+ (e | f)*", "a? b*", "()", "∅", r"x\|y z"] {
            let ast = parse_regex(src).unwrap();
            assert_eq!(parse_regex(&ast.to_string()).unwrap(), ast, "{src}");
        }
    }
}
