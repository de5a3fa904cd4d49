//! The SMC source language: arithmetic and boolean expressions and statements.
//!
//! ```text
//! stmt ::= skip | x := aexp | if bexp then stmt else stmt | while bexp do stmt
//!        | stmt ; stmt | ( stmt )
//! bexp ::= aexp <= aexp
//! aexp ::= n | x | aexp + aexp | ( aexp )
//! ```
//!
//! `;` and `+` associate to the left; the branches of `if` and the body of `while`
//! extend over a single statement, so `;` binds loosest.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AExp {
    Num(u64),
    Var(String),
    Add(Box<AExp>, Box<AExp>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BExp {
    Le(AExp, AExp),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stmt {
    Assign(String, AExp),
    If(BExp, Box<Stmt>, Box<Stmt>),
    While(BExp, Box<Stmt>),
    Skip,
    Seq(Box<Stmt>, Box<Stmt>),
}

impl AExp {
    fn collect(&self, vars: &mut Vec<String>, nums: &mut Vec<u64>) {
        match self {
            AExp::Num(n) => nums.push(*n),
            AExp::Var(x) => vars.push(x.clone()),
            AExp::Add(a, b) => {
                a.collect(vars, nums);
                b.collect(vars, nums);
            }
        }
    }
}

impl Stmt {
    fn collect(&self, vars: &mut Vec<String>, nums: &mut Vec<u64>) {
        match self {
            Stmt::Assign(x, a) => {
                vars.push(x.clone());
                a.collect(vars, nums);
            }
            Stmt::If(BExp::Le(a, b), s1, s2) => {
                a.collect(vars, nums);
                b.collect(vars, nums);
                s1.collect(vars, nums);
                s2.collect(vars, nums);
            }
            Stmt::While(BExp::Le(a, b), s) => {
                a.collect(vars, nums);
                b.collect(vars, nums);
                s.collect(vars, nums);
            }
            Stmt::Skip => {}
            Stmt::Seq(s1, s2) => {
                s1.collect(vars, nums);
                s2.collect(vars, nums);
            }
        }
    }

    /// Program variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let (mut vars, mut nums) = (Vec::new(), Vec::new());
        self.collect(&mut vars, &mut nums);
        let mut out: Vec<String> = Vec::new();
        for v in vars {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Numeric literals, sorted and deduplicated.
    pub fn literals(&self) -> Vec<u64> {
        let (mut vars, mut nums) = (Vec::new(), Vec::new());
        self.collect(&mut vars, &mut nums);
        nums.sort_unstable();
        nums.dedup();
        nums
    }
}

impl fmt::Display for AExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AExp::Num(n) => write!(f, "{n}"),
            AExp::Var(x) => f.write_str(x),
            AExp::Add(a, b) => match **b {
                AExp::Add(..) => write!(f, "{a} + ({b})"),
                _ => write!(f, "{a} + {b}"),
            },
        }
    }
}

impl fmt::Display for BExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let BExp::Le(a, b) = self;
        write!(f, "{a} <= {b}")
    }
}

fn fmt_single(s: &Stmt, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match s {
        Stmt::Seq(..) => write!(f, "({s})"),
        _ => write!(f, "{s}"),
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Assign(x, a) => write!(f, "{x} := {a}"),
            Stmt::If(b, s1, s2) => {
                write!(f, "if {b} then ")?;
                fmt_single(s1, f)?;
                f.write_str(" else ")?;
                fmt_single(s2, f)
            }
            Stmt::While(b, s) => {
                write!(f, "while {b} do ")?;
                fmt_single(s, f)
            }
            Stmt::Skip => f.write_str("skip"),
            Stmt::Seq(a, b) => {
                // the left operand may itself be a sequence; a trailing if/while on the
                // left would swallow the `;`, so parenthesize those
                match **a {
                    Stmt::If(..) | Stmt::While(..) => write!(f, "({a}); ")?,
                    _ => write!(f, "{a}; ")?,
                }
                fmt_single(b, f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Assign,
    Le,
    Plus,
    Semi,
    LParen,
    RParen,
}

const KEYWORDS: [&str; 6] = ["if", "then", "else", "while", "do", "skip"];

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let at = |t| (t, li + 1, col);
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse()
                    .map_err(|_| Error::syntax(li + 1, col, format!("numeral `{s}` is too large")))?;
                out.push(at(Tok::Num(n)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(at(Tok::Ident(chars[start..i].iter().collect())));
            } else {
                let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
                let (tok, len) = match (two.as_str(), c) {
                    (":=", _) => (Tok::Assign, 2),
                    ("<=", _) => (Tok::Le, 2),
                    (_, '+') => (Tok::Plus, 1),
                    (_, ';') => (Tok::Semi, 1),
                    (_, '(') => (Tok::LParen, 1),
                    (_, ')') => (Tok::RParen, 1),
                    _ => return Err(Error::syntax(li + 1, col, format!("unexpected character `{c}`"))),
                };
                out.push(at(tok));
                i += len;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or((1, 1), |t| (t.1, t.2));
        Error::syntax(line, col, msg)
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{kw}`")))
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn seq(&mut self) -> Result<Stmt> {
        let mut s = self.stmt()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            let t = self.stmt()?;
            s = Stmt::Seq(Box::new(s), Box::new(t));
        }
        Ok(s)
    }

    fn stmt(&mut self) -> Result<Stmt> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let s = self.seq()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(s)
            }
            Some(Tok::Ident(kw)) if kw == "skip" => {
                self.pos += 1;
                Ok(Stmt::Skip)
            }
            Some(Tok::Ident(kw)) if kw == "if" => {
                self.pos += 1;
                let b = self.bexp()?;
                self.expect_keyword("then")?;
                let s1 = self.stmt()?;
                self.expect_keyword("else")?;
                let s2 = self.stmt()?;
                Ok(Stmt::If(b, Box::new(s1), Box::new(s2)))
            }
            Some(Tok::Ident(kw)) if kw == "while" => {
                self.pos += 1;
                let b = self.bexp()?;
                self.expect_keyword("do")?;
                let s = self.stmt()?;
                Ok(Stmt::While(b, Box::new(s)))
            }
            Some(Tok::Ident(x)) if !KEYWORDS.contains(&x.as_str()) => {
                self.pos += 1;
                self.expect(Tok::Assign, "`:=`")?;
                Ok(Stmt::Assign(x, self.aexp()?))
            }
            _ => Err(self.err("expected a statement")),
        }
    }

    fn bexp(&mut self) -> Result<BExp> {
        let a = self.aexp()?;
        self.expect(Tok::Le, "`<=`")?;
        Ok(BExp::Le(a, self.aexp()?))
    }

    fn aexp(&mut self) -> Result<AExp> {
        let mut a = self.atom()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            a = AExp::Add(Box::new(a), Box::new(self.atom()?));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<AExp> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(AExp::Num(n))
            }
            Some(Tok::Ident(x)) if !KEYWORDS.contains(&x.as_str()) => {
                self.pos += 1;
                Ok(AExp::Var(x))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let a = self.aexp()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(a)
            }
            _ => Err(self.err("expected an arithmetic expression")),
        }
    }
}

/// Parses an SMC program.
pub fn parse_program(text: &str) -> Result<Stmt> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    if p.toks.is_empty() {
        return Err(Error::syntax(1, 1, "empty program"));
    }
    let s = p.seq()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected input after the program"));
    }
    Ok(s)
}
