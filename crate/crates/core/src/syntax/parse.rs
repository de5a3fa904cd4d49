//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence, tightest first: `!`, `&`, `|`, `->`, `<->`. `&` and `|` associate
//! to the left, `->` and `<->` to the right.

use super::formula::Formula;
use super::signature::{is_ident_char, Signature};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Bang,
    Amp,
    Bar,
    Arrow,
    DArrow,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    At,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::At => "`@`".into(),
        }
    }
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, len) = match c {
            '!' => (Tok::Bang, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Bar, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            ',' => (Tok::Comma, 1),
            '@' => (Tok::At, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                (Tok::DArrow, 3)
            }
            c if is_ident_char(c) => {
                let start = i;
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                (Tok::Ident(chars[start..j].iter().collect()), j - start)
            }
            other => return Err(Error::syntax(line, col, format!("unexpected character `{other}`"))),
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

struct Parser<'a> {
    sig: &'a Signature,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, self.col(), msg)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            let found = self
                .peek()
                .map_or("end of input".to_string(), Tok::describe);
            Err(self.err(format!("expected {}, found {found}", tok.describe())))
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let lhs = self.implication()?;
        if self.eat(&Tok::DArrow) {
            let rhs = self.iff()?;
            return Ok(lhs.iff(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            acc = acc.or(self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(self.unary()?.not());
        }
        self.atom()
    }

    fn args(&mut self) -> Result<Vec<Formula>> {
        self.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.iff()?);
            if self.eat(&Tok::RParen) {
                return Ok(args);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        let col = self.col();
        match self.bump() {
            Some(Tok::LParen) => {
                let f = self.iff()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::LBrack) => {
                let name = match self.bump() {
                    Some(Tok::Ident(s)) => s,
                    _ => return Err(Error::syntax(self.line, col + 1, "expected operation name after `[`")),
                };
                self.expect(&Tok::RBrack)?;
                if self.sig.op(&name).is_none() {
                    return Err(Error::UnknownSymbol(name));
                }
                let args = self.args()?;
                self.sig.mk_dual(&name, args)
            }
            Some(Tok::Ident(name)) => {
                if (name == "bot" || name == "top") && self.eat(&Tok::At) {
                    let sort = match self.bump() {
                        Some(Tok::Ident(s)) => s,
                        _ => return Err(Error::syntax(self.line, col, "expected sort name after `@`")),
                    };
                    let s = self.sig.sort_or_err(&sort)?;
                    return Ok(if name == "bot" {
                        self.sig.mk_bot(s)
                    } else {
                        self.sig.mk_top(s)
                    });
                }
                if self.sig.var_sort(&name).is_some() {
                    return Ok(Formula::var(&name));
                }
                if self.sig.op(&name).is_some() {
                    let args = if self.peek() == Some(&Tok::LParen) {
                        self.args()?
                    } else {
                        Vec::new()
                    };
                    return self.sig.mk_app(&name, args);
                }
                Err(Error::UnknownSymbol(name))
            }
            Some(t) => Err(Error::syntax(self.line, col, format!("unexpected {}", t.describe()))),
            None => Err(Error::syntax(self.line, col, "unexpected end of input")),
        }
    }
}

/// Parses and sort-checks a formula.
pub fn parse_formula(sig: &Signature, text: &str) -> Result<Formula> {
    parse_formula_at(sig, text, 1)
}

/// As [`parse_formula`], reporting syntax errors at the given line of a larger file.
pub fn parse_formula_at(sig: &Signature, text: &str, line: usize) -> Result<Formula> {
    let toks = lex(text, line)?;
    let mut p = Parser {
        sig,
        toks,
        pos: 0,
        line,
        end_col: text.chars().count() + 1,
    };
    let f = p.iff()?;
    if let Some(t) = p.peek() {
        return Err(p.err(format!("trailing input at {}", t.describe())));
    }
    sig.sort_of(&f)?;
    Ok(f)
}

/// Splits `text` at top-level occurrences of `sep` (outside parentheses and brackets).
pub(crate) fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_signature;

    fn sig() -> Signature {
        parse_signature(
            "sort s\nsort t\nop f : s -> s\nop exec : t s -> s\nop c : -> s\nop 0 : -> t\nvar p : s\nvar q : s\nvar r : s\nvar u : t\n",
        )
        .unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let sig = sig();
        let (p, q, r) = (Formula::var("p"), Formula::var("q"), Formula::var("r"));
        assert_eq!(
            parse_formula(&sig, "p -> q | r").unwrap(),
            p.clone().implies(q.clone().or(r.clone()))
        );
        assert_eq!(
            parse_formula(&sig, "p -> q -> r").unwrap(),
            p.clone().implies(q.clone().implies(r.clone()))
        );
        assert_eq!(
            parse_formula(&sig, "p | q | r").unwrap(),
            p.clone().or(q.clone()).or(r.clone())
        );
        assert_eq!(
            parse_formula(&sig, "!p & q | r").unwrap(),
            p.clone().not().and(q.clone()).or(r.clone())
        );
        assert_eq!(
            parse_formula(&sig, "p <-> q -> r").unwrap(),
            p.iff(q.implies(r))
        );
    }

    #[test]
    fn applications_and_duals() {
        let sig = sig();
        let d = parse_formula(&sig, "[exec](u, p)").unwrap();
        assert_eq!(d, Formula::dual("exec", [Formula::var("u"), Formula::var("p")]));
        assert_eq!(parse_formula(&sig, "c").unwrap(), Formula::constant("c"));
        assert_eq!(parse_formula(&sig, "c()").unwrap(), Formula::constant("c"));
        assert_eq!(
            parse_formula(&sig, "exec(0, f(p))").unwrap(),
            Formula::app("exec", [Formula::constant("0"), Formula::app("f", [Formula::var("p")])])
        );
        let s = sig.sort("s").unwrap();
        assert_eq!(parse_formula(&sig, "bot@s").unwrap(), sig.mk_bot(s));
        assert_eq!(parse_formula(&sig, "top@s").unwrap(), sig.mk_top(s));
    }

    #[test]
    fn errors_carry_positions() {
        let sig = sig();
        match parse_formula(&sig, "p & (q").unwrap_err() {
            Error::Syntax { pos, .. } => assert_eq!(pos.col, 7),
            e => panic!("{e}"),
        }
        match parse_formula(&sig, "p $ q").unwrap_err() {
            Error::Syntax { pos, .. } => assert_eq!(pos.col, 3),
            e => panic!("{e}"),
        }
        assert!(matches!(parse_formula(&sig, "p | u"), Err(Error::Sort(_))));
        assert!(matches!(parse_formula(&sig, "zz"), Err(Error::UnknownSymbol(_))));
        assert!(parse_formula(&sig, "[c]()").is_err());
        assert!(parse_formula(&sig, "p q").is_err());
    }

    #[test]
    fn top_level_split() {
        assert_eq!(split_top_level("a, f(b, c), [g](d,e)", ','), vec!["a", " f(b, c)", " [g](d,e)"]);
    }
}
