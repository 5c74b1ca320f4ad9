//! Concrete syntax: a DLV-style parser and printer for programs, plus
//! answer-set serialization.

use crate::error::{Error, Result};
use crate::program::{ArithOp, Atom, BodyItem, Builtin, CmpOp, Expr, Literal, Program, Rule, Term};
use crate::solve::AnswerSet;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Location of a parsed rule: byte offsets plus 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Colon,
    Minus,
    Plus,
    Bar,
    Cmp(CmpOp),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
    line: usize,
    column: usize,
}

impl Token {
    fn span(&self) -> SourceSpan {
        SourceSpan { start: self.start, end: self.end, line: self.line, column: self.column }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    let err = |msg: String, start: usize, line: usize, col: usize| Error::Syntax {
        message: msg,
        span: SourceSpan { start, end: start + 1, line, column: col },
    };
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let column = pos - line_start + 1;
        if c == '\n' {
            line += 1;
            line_start = pos + 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '%' {
            while i < bytes.len() && bytes[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        let peek = |k: usize| bytes.get(i + k).map(|b| b.1);
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            '|' => {
                i += 1;
                Tok::Bar
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            ':' => {
                if peek(1) == Some('-') {
                    i += 2;
                    Tok::If
                } else {
                    i += 1;
                    Tok::Colon
                }
            }
            '<' => match peek(1) {
                Some('=') => {
                    i += 2;
                    Tok::Cmp(CmpOp::Le)
                }
                Some('>') => {
                    i += 2;
                    Tok::Cmp(CmpOp::Ne)
                }
                _ => {
                    i += 1;
                    Tok::Cmp(CmpOp::Lt)
                }
            },
            '>' => {
                if peek(1) == Some('=') {
                    i += 2;
                    Tok::Cmp(CmpOp::Ge)
                } else {
                    i += 1;
                    Tok::Cmp(CmpOp::Gt)
                }
            }
            '=' => {
                i += if peek(1) == Some('=') { 2 } else { 1 };
                Tok::Cmp(CmpOp::Eq)
            }
            '!' => {
                if peek(1) == Some('=') {
                    i += 2;
                    Tok::Cmp(CmpOp::Ne)
                } else {
                    return Err(err("expected `!=`".into(), pos, line, column));
                }
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match bytes.get(i).map(|b| b.1) {
                        None => return Err(err("unterminated string".into(), pos, line, column)),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match bytes.get(i + 1).map(|b| b.1) {
                                Some('n') => s.push('\n'),
                                Some(e @ ('"' | '\\')) => s.push(e),
                                _ => return Err(err("bad escape in string".into(), pos, line, column)),
                            }
                            i += 2;
                        }
                        Some('\n') => return Err(err("newline in string".into(), pos, line, column)),
                        Some(ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(d) = bytes.get(i).map(|b| b.1).filter(char::is_ascii_digit) {
                    s.push(d);
                    i += 1;
                }
                if bytes.get(i).is_some_and(|b| is_ident_char(b.1) && !b.1.is_ascii_digit()) {
                    return Err(err(format!("malformed number `{s}...`"), pos, line, column));
                }
                Tok::Int(s.parse().map_err(|_| err(format!("integer `{s}` out of range"), pos, line, column))?)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(d) = bytes.get(i).map(|b| b.1).filter(|&d| is_ident_char(d)) {
                    s.push(d);
                    i += 1;
                }
                if c.is_ascii_uppercase() || c == '_' {
                    Tok::Var(s)
                } else {
                    Tok::Ident(s)
                }
            }
            other => return Err(err(format!("unexpected character `{other}`"), pos, line, column)),
        };
        let end = bytes.get(i).map_or(text.len(), |b| b.0);
        out.push(Token { tok, start: pos, end, line, column });
    }
    out.push(Token { tok: Tok::Eof, start: text.len(), end: text.len(), line, column: text.len() - line_start + 1 });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { message: msg.into(), span: self.toks[self.pos].span() })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn program(&mut self) -> Result<Vec<Rule>> {
        let mut rules = Vec::new();
        while *self.peek() != Tok::Eof {
            rules.push(self.rule()?);
        }
        Ok(rules)
    }

    fn rule(&mut self) -> Result<Rule> {
        let first = self.toks[self.pos].clone();
        let mut label = None;
        if let (Tok::Ident(name), Tok::Colon) = (self.peek().clone(), self.peek_at(1).clone()) {
            self.bump();
            self.bump();
            label = Some(name);
        }
        let mut head = Vec::new();
        if *self.peek() != Tok::If {
            head.push(self.literal()?);
            loop {
                match self.peek() {
                    Tok::Ident(v) if v == "v" => {
                        self.bump();
                    }
                    Tok::Bar => {
                        self.bump();
                    }
                    _ => break,
                }
                head.push(self.literal()?);
            }
        }
        let mut body = Vec::new();
        if *self.peek() == Tok::If {
            self.bump();
            if *self.peek() == Tok::Dot {
                return self.error("empty body after `:-`");
            }
            body.push(self.body_item()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                body.push(self.body_item()?);
            }
        }
        let last = self.toks[self.pos].clone();
        self.expect(Tok::Dot, "`.`")?;
        let span = SourceSpan { start: first.start, end: last.end, line: first.line, column: first.column };
        let mut r = match label {
            Some(name) => Rule::labelled(name, head, body),
            None => Rule::new(head, body),
        };
        r.span = Some(span);
        Ok(r)
    }

    fn starts_literal(&self, k: usize) -> bool {
        match self.peek_at(k) {
            Tok::Ident(_) => !matches!(self.peek_at(k + 1), Tok::Cmp(_)),
            Tok::Minus => matches!(self.peek_at(k + 1), Tok::Ident(_)),
            _ => false,
        }
    }

    fn body_item(&mut self) -> Result<BodyItem> {
        if let Tok::Ident(w) = self.peek() {
            if w == "not" && self.starts_literal(1) {
                self.bump();
                return Ok(BodyItem::Neg(self.literal()?));
            }
        }
        if self.starts_literal(0) {
            return Ok(BodyItem::Pos(self.literal()?));
        }
        let lhs = self.term()?;
        let op = match self.peek() {
            Tok::Cmp(op) => *op,
            other => return self.error(format!("expected comparison, found {}", describe(other))),
        };
        self.bump();
        let a = self.term()?;
        let rhs = match self.peek() {
            Tok::Plus => {
                self.bump();
                Expr::Arith(a, ArithOp::Add, self.term()?)
            }
            Tok::Minus => {
                self.bump();
                Expr::Arith(a, ArithOp::Sub, self.term()?)
            }
            _ => Expr::Term(a),
        };
        Ok(BodyItem::Builtin(Builtin { lhs, op, rhs }))
    }

    fn literal(&mut self) -> Result<Literal> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let pred = match self.peek().clone() {
            Tok::Ident(p) => {
                self.bump();
                p
            }
            other => return self.error(format!("expected predicate, found {}", describe(&other))),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(Literal { neg, atom: Atom { pred, args } })
    }

    fn term(&mut self) -> Result<Term> {
        let t = match self.peek().clone() {
            Tok::Ident(s) => Term::Sym(s),
            Tok::Var(s) => Term::Var(s),
            Tok::Int(i) => Term::Int(i),
            Tok::Str(s) => Term::Str(s),
            Tok::Minus => {
                if let Tok::Int(i) = self.peek_at(1).clone() {
                    self.bump();
                    Term::Int(-i)
                } else {
                    return self.error("expected integer after `-`");
                }
            }
            other => return self.error(format!("expected term, found {}", describe(&other))),
        };
        self.bump();
        Ok(t)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
        Tok::Int(i) => format!("`{i}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::If => "`:-`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Cmp(op) => format!("`{}`", op.symbol()),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a program. Unlabelled rules are named 1, 2, ... by position.
pub fn parse(text: &str) -> Result<Program> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let rules = p.program()?;
    let mut labels = HashSet::new();
    for r in &rules {
        if r.labelled && !labels.insert(r.name.clone()) {
            return Err(Error::DuplicateRuleName { name: r.name.to_string(), span: r.span });
        }
    }
    Program::new(rules)
}

/// Parses a single literal such as `-p(a,"x")`.
pub fn parse_literal(text: &str) -> Result<Literal> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let l = p.literal()?;
    if *p.peek() != Tok::Eof {
        return p.error("trailing input after literal");
    }
    Ok(l)
}

/// Prints a program one rule per line.
pub fn print(p: &Program) -> String {
    p.to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Text,
    Json,
}

/// Text: one `{l1, l2}` per line. JSON: an array of arrays of literal strings.
pub fn print_answer_sets(sets: &[AnswerSet], format: Format) -> String {
    let rows: Vec<Vec<String>> = sets.iter().map(|s| s.literals.iter().map(ToString::to_string).collect()).collect();
    match format {
        Format::Text => rows.iter().map(|r| format!("{{{}}}", r.join(", "))).collect::<Vec<_>>().join("\n"),
        Format::Json => serde_json::to_string(&rows).expect("string arrays serialize"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::Producer;

    #[test]
    fn disjunctive_fact() {
        let p = parse("a v -a.").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.rules()[0].head, vec![Literal::prop("a"), Literal::prop("-a")]);
    }

    #[test]
    fn frame_axiom_with_builtin() {
        let p = parse("armed(T1) :- armed(T), not -armed(T1), time(T), T1=T+1.").unwrap();
        let r = &p.rules()[0];
        let pos: Vec<String> = r.pbody().map(ToString::to_string).collect();
        assert_eq!(pos, vec!["armed(T)", "time(T)"]);
        let neg: Vec<String> = r.nbody().map(ToString::to_string).collect();
        assert_eq!(neg, vec!["-armed(T1)"]);
        assert_eq!(r.builtins().count(), 1);
        assert_eq!(r.builtins().next().unwrap().to_string(), "T1=T+1");
    }

    #[test]
    fn quoted_constants() {
        let p = parse("notok :- ninS(\"y0\"),ninS(\"-y0\").").unwrap();
        assert!(p.is_ground());
        assert_eq!(p.to_string(), "notok :- ninS(\"y0\"), ninS(\"-y0\").");
    }

    #[test]
    fn round_trips() {
        assert_eq!(print(&parse("a :- b, not c.").unwrap()), "a :- b, not c.");
        assert_eq!(print(&Program::empty()), "");
        assert_eq!(print(&parse("x0 v -x0.  x1 v -x1.").unwrap()), "x0 v -x0.\nx1 v -x1.");
        let src = "r: p(X,-3,\"q\\\"s\") :- q(X), not -s(X), X != 4, X < Y, Y = X-1, t(Y).\n:- a.";
        let p1 = parse(src).unwrap();
        assert_eq!(parse(&print(&p1)).unwrap(), p1);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse(":- ."), Err(Error::Syntax { .. })));
        assert!(matches!(parse("a :- b"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("r: a. r: b."), Err(Error::DuplicateRuleName { .. })));
        match parse("a.\nb :- ?.") {
            Err(Error::Syntax { span, .. }) => assert_eq!((span.line, span.column), (2, 6)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_and_not_spacing() {
        let p = parse("% comment\na :- not b,not c. % trailing\nnotok.").unwrap();
        assert_eq!(p.rules()[0].nbody().count(), 2);
        assert_eq!(p.rules()[1].head[0].to_string(), "notok");
    }

    #[test]
    fn answer_set_formats() {
        let s = AnswerSet::new([Literal::prop("b"), Literal::prop("a")].into(), Producer::Solver);
        assert_eq!(print_answer_sets(std::slice::from_ref(&s), Format::Text), "{a, b}");
        assert_eq!(print_answer_sets(&[], Format::Text), "");
        let t = AnswerSet::new([parse_literal("strat(barilla)").unwrap()].into(), Producer::Brute);
        assert_eq!(print_answer_sets(&[t], Format::Json), "[[\"strat(barilla)\"]]");
    }
}
