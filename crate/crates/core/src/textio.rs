//! Text formats for structures (`.str`) and formulas (`.fml`).
//!
//! ```text
//! structure { universe 3; rel R/2 { (0,1) (0,2) } const c = 0; }
//! splitall (x0 x1) { {} -> top; {0 1} -> R(x0, x1); else -> bot; }
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::logic::{Atom, Fml, Formula, Split, Term, Var};
use crate::structure::{Elem, Structure, Vocabulary};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceText {
    pub text: String,
    pub origin: String,
}

impl SourceText {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        SourceText { text: text.into(), origin: origin.into() }
    }

    pub fn anonymous(text: impl Into<String>) -> Self {
        Self::new(text, "<input>")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{origin}:{line}:{column}: syntax error: {message}")]
    Syntax { origin: String, line: usize, column: usize, message: String },
    #[error("{origin}:{line}:{column}: {message}")]
    Semantic { origin: String, line: usize, column: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u64),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

const PUNCT: [&str; 11] = ["->", "(", ")", "{", "}", ",", ";", ".", "=", "/", "*"];

const KEYWORDS: [&str; 15] = [
    "top", "bot", "not", "and", "or", "exists", "all", "splitall", "splitex", "else", "structure",
    "universe", "rel", "const", "inf",
];

fn lex(src: &SourceText) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            advance(1, &mut i, &mut col);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i, &mut col);
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i, &mut col);
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| ParseError::Syntax {
                origin: src.origin.clone(),
                line: pos.line,
                column: pos.column,
                message: format!("number `{s}` is too large"),
            })?;
            out.push((Tok::Nat(n), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                advance(1, &mut i, &mut col);
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if let Some(p) = PUNCT.iter().find(|p| {
            let pc: Vec<char> = p.chars().collect();
            chars[i..].starts_with(&pc)
        }) {
            advance(p.len(), &mut i, &mut col);
            out.push((Tok::Punct(p), pos));
        } else {
            return Err(ParseError::Syntax {
                origin: src.origin.clone(),
                line,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    origin: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a SourceText) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0, origin: &src.origin })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let p = self.pos();
        Err(ParseError::Syntax { origin: self.origin.into(), line: p.line, column: p.column, message: message.into() })
    }

    fn semantic_at<T>(&self, p: Pos, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Semantic { origin: self.origin.into(), line: p.line, column: p.column, message: message.into() })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == k)
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.is_punct(p) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected `{p}`, found {}", self.peek()))
        }
    }

    fn expect_kw(&mut self, k: &str) -> Result<(), ParseError> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected `{k}`, found {}", self.peek()))
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        let hit = self.is_punct(p);
        if hit {
            self.bump();
        }
        hit
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Tok::Nat(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            t => self.syntax(format!("expected a number, found {t}")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            t => self.syntax(format!("expected an identifier, found {t}")),
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.syntax(format!("unexpected trailing {t}")),
        }
    }

    // ---- structures ----

    fn structure_block(&mut self) -> Result<(Option<String>, Structure), ParseError> {
        self.expect_kw("structure")?;
        let name = if matches!(self.peek(), Tok::Ident(_)) { Some(self.ident()?) } else { None };
        let start = self.pos();
        self.expect_punct("{")?;
        let mut size = None;
        let mut rels: BTreeMap<String, (usize, BTreeSet<Vec<Elem>>, Pos)> = BTreeMap::new();
        let mut consts: BTreeMap<String, (Elem, Pos)> = BTreeMap::new();
        while !self.is_punct("}") {
            let p = self.pos();
            if self.is_kw("universe") {
                self.bump();
                if size.is_some() {
                    return self.semantic_at(p, "universe declared twice");
                }
                size = Some(self.nat()? as usize);
                self.eat_punct(";");
            } else if self.is_kw("rel") {
                self.bump();
                let name = self.ident()?;
                self.expect_punct("/")?;
                let arity = self.nat()? as usize;
                self.expect_punct("{")?;
                let mut tuples = BTreeSet::new();
                while self.eat_punct("(") {
                    let tp = self.pos();
                    let mut t = vec![self.nat()? as usize];
                    while self.eat_punct(",") {
                        t.push(self.nat()? as usize);
                    }
                    self.expect_punct(")")?;
                    if t.len() != arity {
                        return self.semantic_at(
                            tp,
                            format!("relation `{name}` has arity {arity}, got a tuple of length {}", t.len()),
                        );
                    }
                    tuples.insert(t);
                }
                self.expect_punct("}")?;
                self.eat_punct(";");
                if rels.insert(name.clone(), (arity, tuples, p)).is_some() {
                    return self.semantic_at(p, format!("relation `{name}` declared twice"));
                }
            } else if self.is_kw("const") {
                self.bump();
                let name = self.ident()?;
                self.expect_punct("=")?;
                let e = self.nat()? as usize;
                self.eat_punct(";");
                if consts.insert(name.clone(), (e, p)).is_some() {
                    return self.semantic_at(p, format!("constant `{name}` declared twice"));
                }
            } else {
                return self.syntax(format!("expected `universe`, `rel`, `const` or `}}`, found {}", self.peek()));
            }
        }
        self.expect_punct("}")?;
        let Some(size) = size else {
            return self.semantic_at(start, "missing `universe` declaration");
        };
        for (name, (_, tuples, p)) in &rels {
            if let Some(e) = tuples.iter().flatten().find(|&&e| e >= size) {
                return self.semantic_at(*p, format!("element {e} of `{name}` is outside universe of size {size}"));
            }
        }
        for (name, (e, p)) in &consts {
            if *e >= size {
                return self.semantic_at(*p, format!("constant `{name}` = {e} is outside universe of size {size}"));
            }
        }
        let vocab = Vocabulary::new(rels.iter().map(|(n, (a, _, _))| (n.clone(), *a)), consts.keys().cloned())
            .or_else(|e| self.semantic_at(start, e.to_string()))?;
        let s = Structure::new(
            Arc::new(vocab),
            size,
            rels.into_iter().map(|(n, (_, t, _))| (n, t)).collect(),
            consts.into_iter().map(|(n, (e, _))| (n, e)).collect(),
        )
        .or_else(|e| self.semantic_at(start, e.to_string()))?;
        Ok((name, s))
    }

    // ---- formulas ----

    fn term(&mut self, vocab: &Vocabulary) -> Result<Term, ParseError> {
        let name = self.ident()?;
        Ok(if vocab.constant_index(&name).is_some() { Term::Const(name) } else { Term::Var(Var::new(&name)) })
    }

    fn formula(&mut self, vocab: &Vocabulary) -> Result<Fml, ParseError> {
        let p = self.pos();
        let kw = match self.peek() {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => s.clone(),
            Tok::Ident(_) => return self.atom(vocab),
            t => return self.syntax(format!("expected a formula, found {t}")),
        };
        self.bump();
        match kw.as_str() {
            "top" => Ok(Formula::top()),
            "bot" => Ok(Formula::bot()),
            "not" => Ok(Formula::not(self.formula(vocab)?)),
            "and" | "or" => {
                self.expect_punct("{")?;
                let mut subs = Vec::new();
                while !self.is_punct("}") {
                    subs.push(self.formula(vocab)?);
                    self.eat_punct(";");
                }
                self.bump();
                Ok(if kw == "and" { Formula::and(subs) } else { Formula::or(subs) })
            }
            "exists" | "all" => {
                let v = Var::new(&self.ident()?);
                self.expect_punct(".")?;
                let body = self.formula(vocab)?;
                Ok(if kw == "exists" { Formula::exists(v, body) } else { Formula::forall(v, body) })
            }
            "splitall" | "splitex" => self.split(vocab, kw == "splitall", p),
            _ => self.semantic_at(p, format!("`{kw}` cannot start a formula")),
        }
    }

    fn split(&mut self, vocab: &Vocabulary, universal: bool, start: Pos) -> Result<Fml, ParseError> {
        self.expect_punct("(")?;
        let mut bound = Vec::new();
        while !self.is_punct(")") {
            bound.push(Var::new(&self.ident()?));
            self.eat_punct(",");
        }
        self.bump();
        let m = bound.len();
        if m > crate::logic::THETA_MAX {
            return self.semantic_at(start, format!("split width {m} exceeds the maximum {}", crate::logic::THETA_MAX));
        }
        self.expect_punct("{")?;
        let mut entries: HashMap<u64, Fml> = HashMap::new();
        let mut default = None;
        while !self.is_punct("}") {
            let ep = self.pos();
            if self.is_kw("else") {
                self.bump();
                self.expect_punct("->")?;
                if default.is_some() {
                    return self.semantic_at(ep, "duplicate `else` entry");
                }
                default = Some(self.formula(vocab)?);
            } else {
                self.expect_punct("{")?;
                let mut mask = 0u64;
                while !self.is_punct("}") {
                    let ip = self.pos();
                    let i = self.nat()?;
                    if i as usize >= m {
                        return self.semantic_at(ip, format!("index {i} out of range for {m} bound variables"));
                    }
                    mask |= 1 << i;
                    self.eat_punct(",");
                }
                self.bump();
                self.expect_punct("->")?;
                let f = self.formula(vocab)?;
                if entries.insert(mask, f).is_some() {
                    return self.semantic_at(ep, "duplicate table entry");
                }
            }
            self.expect_punct(";")?;
        }
        self.bump();
        let mut table = Vec::with_capacity(1 << m);
        for mask in 0..1u64 << m {
            match entries.remove(&mask).or_else(|| default.clone()) {
                Some(f) => table.push(f),
                None => {
                    return self.semantic_at(
                        start,
                        format!("missing table entry for subset {{{}}} and no `else`", mask_string(mask)),
                    )
                }
            }
        }
        let split = Split::new(bound, table).or_else(|e| self.semantic_at(start, e.to_string()))?;
        Ok(Arc::new(if universal { Formula::SplitForall(split) } else { Formula::SplitExists(split) }))
    }

    fn atom(&mut self, vocab: &Vocabulary) -> Result<Fml, ParseError> {
        let p = self.pos();
        if matches!(self.peek2(), Tok::Punct("(")) {
            let name = self.ident()?;
            self.bump();
            let mut args = vec![self.term(vocab)?];
            while self.eat_punct(",") {
                args.push(self.term(vocab)?);
            }
            self.expect_punct(")")?;
            match vocab.arity(&name) {
                None => self.semantic_at(p, format!("unknown relation `{name}`")),
                Some(a) if a != args.len() => {
                    self.semantic_at(p, format!("relation `{name}` has arity {a}, got {} arguments", args.len()))
                }
                Some(_) => Ok(Formula::rel(&name, args)),
            }
        } else {
            let a = self.term(vocab)?;
            self.expect_punct("=")?;
            let b = self.term(vocab)?;
            Ok(Formula::eq(a, b))
        }
    }
}

fn mask_string(mask: u64) -> String {
    crate::partition::mask_indices(mask).iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_structure(src: &SourceText) -> Result<Structure, ParseError> {
    let mut p = Parser::new(src)?;
    let (_, s) = p.structure_block()?;
    p.expect_eof()?;
    Ok(s)
}

/// A sequence of (optionally named) structure blocks.
pub fn parse_corpus(src: &SourceText) -> Result<Vec<(Option<String>, Structure)>, ParseError> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    while !matches!(p.peek(), Tok::Eof) {
        out.push(p.structure_block()?);
    }
    Ok(out)
}

pub fn parse_formula(src: &SourceText, vocab: &Vocabulary) -> Result<Fml, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.formula(vocab)?;
    p.expect_eof()?;
    Ok(f)
}

/// Convenience wrapper for inline formulas.
pub fn parse_formula_str(text: &str, vocab: &Vocabulary) -> Result<Fml, ParseError> {
    parse_formula(&SourceText::anonymous(text), vocab)
}

pub fn parse_structure_str(text: &str) -> Result<Structure, ParseError> {
    parse_structure(&SourceText::anonymous(text))
}

fn render_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v.name()),
        Term::Const(c) => out.push_str(c),
    }
}

fn render_into(phi: &Formula, indent: usize, out: &mut String) {
    match phi {
        Formula::Atom(Atom::Eq(a, b)) => {
            render_term(a, out);
            out.push_str(" = ");
            render_term(b, out);
        }
        Formula::Atom(Atom::Rel { name, args }) => {
            out.push_str(name);
            out.push('(');
            for (i, t) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_term(t, out);
            }
            out.push(')');
        }
        Formula::And(fs) if fs.is_empty() => out.push_str("top"),
        Formula::Or(fs) if fs.is_empty() => out.push_str("bot"),
        Formula::Not(f) => {
            out.push_str("not ");
            render_into(f, indent, out);
        }
        Formula::And(fs) | Formula::Or(fs) => {
            out.push_str(if matches!(phi, Formula::And(_)) { "and { " } else { "or { " });
            for (i, f) in fs.iter().enumerate() {
                if i > 0 {
                    out.push_str("; ");
                }
                render_into(f, indent, out);
            }
            out.push_str(" }");
        }
        Formula::Exists(v, f) | Formula::Forall(v, f) => {
            out.push_str(if matches!(phi, Formula::Exists(..)) { "exists " } else { "all " });
            out.push_str(v.name());
            out.push_str(" . ");
            render_into(f, indent, out);
        }
        Formula::SplitForall(s) | Formula::SplitExists(s) => {
            out.push_str(if matches!(phi, Formula::SplitForall(_)) { "splitall (" } else { "splitex (" });
            let names: Vec<&str> = s.bound().iter().map(|v| v.name()).collect();
            out.push_str(&names.join(" "));
            out.push_str(") {\n");
            // the most frequent entry (first on ties) is written once as `else`
            let mut counts: Vec<(usize, usize)> = Vec::new();
            for (i, e) in s.table().iter().enumerate() {
                match counts.iter_mut().find(|(j, _)| s.table()[*j] == *e) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((i, 1)),
                }
            }
            let (def, def_count) = counts.iter().copied().max_by_key(|&(j, c)| (c, std::cmp::Reverse(j))).unwrap_or((0, 0));
            let pad = "  ".repeat(indent + 1);
            for (mask, e) in s.table().iter().enumerate() {
                if def_count > 1 && *e == s.table()[def] {
                    continue;
                }
                let _ = write!(out, "{pad}{{{}}} -> ", mask_string(mask as u64));
                render_into(e, indent + 1, out);
                out.push_str(";\n");
            }
            if def_count > 1 {
                let _ = write!(out, "{pad}else -> ");
                render_into(&s.table()[def], indent + 1, out);
                out.push_str(";\n");
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
    }
}

/// Concrete syntax accepted by [`parse_formula`].
pub fn render(phi: &Formula) -> String {
    let mut out = String::new();
    render_into(phi, 0, &mut out);
    out
}

pub fn render_structure(m: &Structure) -> String {
    render_named_structure(None, m)
}

pub fn render_named_structure(name: Option<&str>, m: &Structure) -> String {
    let mut out = String::from("structure ");
    if let Some(n) = name {
        out.push_str(n);
        out.push(' ');
    }
    let _ = writeln!(out, "{{\n  universe {};", m.size());
    for (i, sym) in m.vocab().relations().iter().enumerate() {
        let _ = write!(out, "  rel {}/{} {{", sym.name, sym.arity);
        for t in m.tuples(i) {
            let items: Vec<String> = t.iter().map(|e| e.to_string()).collect();
            let _ = write!(out, " ({})", items.join(","));
        }
        out.push_str(" }\n");
    }
    for (i, c) in m.vocab().constants().iter().enumerate() {
        let _ = writeln!(out, "  const {c} = {};", m.constant(i));
    }
    out.push_str("}\n");
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_structure(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv() -> Vocabulary {
        Vocabulary::relational(&[("P", 1), ("R", 2)])
    }

    #[test]
    fn structures() {
        let s = parse_structure_str("structure { universe 2; rel P/1 { (0) } }").unwrap();
        assert_eq!(s.size(), 2);
        assert!(s.holds_named("P", &[0]).unwrap());
        assert!(!s.holds_named("P", &[1]).unwrap());
        let r = parse_structure_str("structure { universe 3; rel R/2 { (0,1)(0,2) } }").unwrap();
        assert_eq!(r.tuples_named("R").unwrap().len(), 2);
        let err = parse_structure_str("structure { universe 2; rel P/1 { (5) } }").unwrap_err();
        assert!(matches!(err, ParseError::Semantic { line: 1, .. }), "{err}");
        let err = parse_structure_str("structure { universe 2; rel P/1 { (0 } }").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, column: 38, .. }), "{err}");
        let with_const = parse_structure_str("structure { universe 2; rel P/1 { } const c = 1; }").unwrap();
        assert_eq!(parse_structure_str(&render_structure(&with_const)).unwrap(), with_const);
    }

    #[test]
    fn formulas() {
        let v = pv();
        let f = parse_formula_str("exists x . P(x)", &v).unwrap();
        assert!(matches!(&*f, Formula::Exists(..)));
        let err = parse_formula_str("splitall (x0 x1) { {} -> top; else -> P(x0); }", &v).unwrap_err();
        assert!(matches!(err, ParseError::Semantic { .. }), "{err}");
        let all_top = parse_formula_str("splitall (x0 x1) { else -> top; }", &v).unwrap();
        match &*all_top {
            Formula::SplitForall(s) => assert!(s.table().iter().all(|e| e.is_top())),
            _ => panic!("expected a split"),
        }
        assert!(parse_formula_str("splitall (x0) { {} -> top; }", &v).is_err());
        assert!(parse_formula_str("Q(x)", &v).is_err());
        assert!(parse_formula_str("R(x)", &v).is_err());
        let eq = parse_formula_str("x = y # comment\n", &v).unwrap();
        assert_eq!(eq, Formula::eq(Term::var("x"), Term::var("y")));
    }

    #[test]
    fn render_compresses_with_else() {
        let v = pv();
        let f = parse_formula_str("splitall (x0 x1) { {0 1} -> R(x0, x1); else -> top; }", &v).unwrap();
        let text = render(&f);
        assert!(text.contains("else -> top"), "{text}");
        assert_eq!(text.matches("->").count(), 2);
        assert_eq!(parse_formula_str(&text, &v).unwrap(), f);
    }

    #[test]
    fn corpus_round_trip() {
        let text = "structure a { universe 1; rel P/1 { } }\nstructure b { universe 2; rel P/1 { (1) } }";
        let c = parse_corpus(&SourceText::anonymous(text)).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].0.as_deref(), Some("a"));
        let again: String = c.iter().map(|(n, s)| render_named_structure(n.as_deref(), s)).collect();
        let c2 = parse_corpus(&SourceText::anonymous(again)).unwrap();
        assert_eq!(c, c2);
    }
}
