//! Bracket definition files.
//!
//! ```text
//! # Euler vorticity bracket
//! D=2; gens=w;
//! bracket(w,w) = w_[1,0]*l2 - w_[0,1]*l1;
//! ```
//!
//! Jets are `name_[i1,...,iD]`, a bare generator name is its order-0 jet,
//! `l1`..`lD` are the λ symbols. Entries that are not given are zero.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use pva_core::diffalg::{DiffPoly, Rational, Space};
use pva_core::lambda::{Alphabet, BracketTable, LambdaPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(Rational),
    /// `name_[` followed by the index list and `]`.
    Jet(String, Vec<u32>),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Number(n) => write!(f, "number {n}"),
            Tok::Jet(n, i) => write!(f, "jet {n}_{i:?}"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn err(p: Pos, msg: impl Into<String>) -> ParseError {
    ParseError {
        line: p.line,
        column: p.column,
        message: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c.is_whitespace() {
            bump!();
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
        } else if c.is_ascii_digit() {
            let mut num = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                num.push(chars[i]);
                bump!();
            }
            let mut value = Rational::from_integer(num.parse::<BigInt>().unwrap());
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                bump!();
                let dpos = Pos { line, column: col };
                let mut den = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    den.push(chars[i]);
                    bump!();
                }
                let d = den.parse::<BigInt>().unwrap();
                if d.is_zero() {
                    return Err(err(dpos, "zero denominator"));
                }
                value /= Rational::from_integer(d);
            }
            out.push((Tok::Number(value), pos));
        } else if c.is_ascii_alphabetic() {
            let mut name = String::new();
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                name.push(chars[i]);
                bump!();
            }
            if i < chars.len() && chars[i] == '_' {
                bump!();
                if i >= chars.len() || chars[i] != '[' {
                    return Err(err(Pos { line, column: col }, "expected '[' after '_'"));
                }
                bump!();
                let mut idx = Vec::new();
                loop {
                    while i < chars.len() && chars[i].is_whitespace() {
                        bump!();
                    }
                    let npos = Pos { line, column: col };
                    let mut num = String::new();
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        num.push(chars[i]);
                        bump!();
                    }
                    if num.is_empty() {
                        return Err(err(npos, "expected a non-negative integer in jet index"));
                    }
                    idx.push(num.parse::<u32>().map_err(|_| err(npos, "jet index too large"))?);
                    while i < chars.len() && chars[i].is_whitespace() {
                        bump!();
                    }
                    match chars.get(i) {
                        Some(',') => bump!(),
                        Some(']') => {
                            bump!();
                            break;
                        }
                        _ => return Err(err(Pos { line, column: col }, "expected ',' or ']' in jet index")),
                    }
                }
                out.push((Tok::Jet(name, idx), pos));
            } else {
                out.push((Tok::Ident(name), pos));
            }
        } else if "=;,()+-*^".contains(c) {
            out.push((Tok::Sym(c), pos));
            bump!();
        } else {
            return Err(err(pos, format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

/// A parsed definition file.
#[derive(Clone, Debug)]
pub struct Definition {
    pub names: Vec<String>,
    pub table: BracketTable,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    dim: Option<(usize, Pos)>,
    names: Option<Vec<String>>,
    space: Option<Space>,
}

fn is_lambda_name(s: &str) -> Option<usize> {
    let rest = s.strip_prefix('l')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<Pos, ParseError> {
        let (t, p) = self.next();
        if t == Tok::Sym(c) {
            Ok(p)
        } else {
            Err(err(p, format!("expected '{c}', found {t}")))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.next() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => Err(err(p, format!("expected a name, found {t}"))),
        }
    }

    fn space(&mut self, p: Pos) -> Result<Space, ParseError> {
        if let Some(s) = self.space {
            return Ok(s);
        }
        let Some((d, _)) = self.dim else {
            return Err(err(p, "D must be declared before any bracket"));
        };
        let Some(names) = &self.names else {
            return Err(err(p, "gens must be declared before any bracket"));
        };
        let s = Space::new(d, names.len()).map_err(|e| err(p, e.to_string()))?;
        self.space = Some(s);
        Ok(s)
    }

    fn generator(&self, name: &str, p: Pos) -> Result<usize, ParseError> {
        self.names
            .as_ref()
            .and_then(|ns| ns.iter().position(|n| n == name))
            .ok_or_else(|| err(p, format!("unknown symbol {name}")))
    }

    fn definition(mut self) -> Result<Definition, ParseError> {
        let mut entries: Vec<Option<LambdaPoly>> = Vec::new();
        loop {
            let (t, p) = self.peek().clone();
            match t {
                Tok::Eof => break,
                Tok::Ident(ref k) if k == "D" => {
                    self.next();
                    self.expect('=')?;
                    if self.dim.is_some() {
                        return Err(err(p, "D declared twice"));
                    }
                    let (n, np) = self.next();
                    let d = match n {
                        Tok::Number(r) if r.is_integer() => r.to_integer().try_into().ok(),
                        _ => None,
                    };
                    match d {
                        Some(d) if d >= 1 => self.dim = Some((d, np)),
                        _ => return Err(err(np, "D must be a positive integer")),
                    }
                    self.expect(';')?;
                }
                Tok::Ident(ref k) if k == "gens" => {
                    self.next();
                    self.expect('=')?;
                    if self.names.is_some() {
                        return Err(err(p, "gens declared twice"));
                    }
                    let mut names = Vec::new();
                    loop {
                        let (n, np) = self.ident()?;
                        if ["D", "gens", "bracket"].contains(&n.as_str()) || is_lambda_name(&n).is_some() {
                            return Err(err(np, format!("'{n}' is reserved")));
                        }
                        if names.contains(&n) {
                            return Err(err(np, format!("generator {n} declared twice")));
                        }
                        names.push(n);
                        match self.next() {
                            (Tok::Sym(','), _) => continue,
                            (Tok::Sym(';'), _) => break,
                            (t, p) => return Err(err(p, format!("expected ',' or ';', found {t}"))),
                        }
                    }
                    self.names = Some(names);
                }
                Tok::Ident(ref k) if k == "bracket" => {
                    self.next();
                    let space = self.space(p)?;
                    let n = space.gens();
                    if entries.is_empty() {
                        entries = vec![None; n * n];
                    }
                    self.expect('(')?;
                    let (a, ap) = self.ident()?;
                    let i = self.generator(&a, ap)?;
                    self.expect(',')?;
                    let (b, bp) = self.ident()?;
                    let j = self.generator(&b, bp)?;
                    self.expect(')')?;
                    self.expect('=')?;
                    let value = self.expr(space)?;
                    self.expect(';')?;
                    if entries[i * n + j].is_some() {
                        return Err(err(p, format!("bracket({a},{b}) defined twice")));
                    }
                    entries[i * n + j] = Some(value);
                }
                t => return Err(err(p, format!("expected D, gens or bracket, found {t}"))),
            }
        }
        let eof = self.peek().1;
        let space = self.space(eof)?;
        let entries = if entries.is_empty() {
            vec![LambdaPoly::zero(space); space.gens() * space.gens()]
        } else {
            entries
                .into_iter()
                .map(|e| e.unwrap_or_else(|| LambdaPoly::zero(space)))
                .collect()
        };
        let table = BracketTable::from_entries(space, entries).map_err(|e| err(eof, e.to_string()))?;
        Ok(Definition {
            names: self.names.unwrap(),
            table,
        })
    }

    fn expr(&mut self, s: Space) -> Result<LambdaPoly, ParseError> {
        let mut acc = self.term(s)?;
        loop {
            match self.peek().0 {
                Tok::Sym('+') => {
                    self.next();
                    acc = &acc + &self.term(s)?;
                }
                Tok::Sym('-') => {
                    self.next();
                    acc = &acc - &self.term(s)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self, s: Space) -> Result<LambdaPoly, ParseError> {
        let mut acc = self.unary(s)?;
        while self.peek().0 == Tok::Sym('*') {
            self.next();
            acc = &acc * &self.unary(s)?;
        }
        Ok(acc)
    }

    fn unary(&mut self, s: Space) -> Result<LambdaPoly, ParseError> {
        match self.peek().0 {
            Tok::Sym('-') => {
                self.next();
                Ok(-&self.unary(s)?)
            }
            Tok::Sym('+') => {
                self.next();
                self.unary(s)
            }
            _ => self.power(s),
        }
    }

    fn power(&mut self, s: Space) -> Result<LambdaPoly, ParseError> {
        let base = self.atom(s)?;
        if self.peek().0 != Tok::Sym('^') {
            return Ok(base);
        }
        self.next();
        let (t, p) = self.next();
        let e: u32 = match t {
            Tok::Number(r) if r.is_integer() && r >= Rational::zero() => {
                r.to_integer().try_into().map_err(|_| err(p, "exponent too large"))?
            }
            t => return Err(err(p, format!("expected a non-negative integer exponent, found {t}"))),
        };
        let mut out = LambdaPoly::from_diffpoly(DiffPoly::one(s));
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn atom(&mut self, s: Space) -> Result<LambdaPoly, ParseError> {
        let (t, p) = self.next();
        match t {
            Tok::Number(r) => Ok(LambdaPoly::from_diffpoly(DiffPoly::constant(s, r))),
            Tok::Sym('(') => {
                let v = self.expr(s)?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Jet(name, idx) => {
                let g = self.generator(&name, p)?;
                if idx.len() != s.dim() {
                    return Err(err(
                        p,
                        format!("jet {name} has {} indices, expected {}", idx.len(), s.dim()),
                    ));
                }
                Ok(LambdaPoly::from_diffpoly(DiffPoly::jet_of(s, g, &idx)))
            }
            Tok::Ident(name) => {
                if let Some(k) = is_lambda_name(&name) {
                    if k >= 1 && k <= s.dim() {
                        return Ok(LambdaPoly::var(s, Alphabet::Lambda, k - 1));
                    }
                    return Err(err(p, format!("unknown symbol {name}")));
                }
                let g = self.generator(&name, p)?;
                Ok(LambdaPoly::from_diffpoly(DiffPoly::generator(s, g)))
            }
            t => Err(err(p, format!("unexpected {t}"))),
        }
    }
}

pub fn parse_bracket_file(text: &str) -> Result<Definition, ParseError> {
    let toks = lex(text)?;
    Parser {
        toks,
        at: 0,
        dim: None,
        names: None,
        space: None,
    }
    .definition()
}
