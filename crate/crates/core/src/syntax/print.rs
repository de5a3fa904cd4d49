use std::fmt::Write;

use super::formula::Formula;
use super::signature::Signature;

const IFF: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

/// Prints a formula in the ASCII syntax accepted by [`parse_formula`](super::parse_formula).
///
/// Derived forms are re-sugared: `⊥_s`/`⊤_s` (over the canonical variable), `↔`, `∧`,
/// `→` and duals `[σ](…)`. Parsing the output yields the same kernel tree.
pub fn print_formula(sig: &Signature, phi: &Formula) -> String {
    let mut out = String::new();
    Printer { sig }.go(phi, IFF, &mut out);
    out
}

struct Printer<'a> {
    sig: &'a Signature,
}

impl Printer<'_> {
    fn bot_sort(&self, phi: &Formula) -> Option<&str> {
        let (a, b) = phi.as_and()?;
        let p = match a {
            Formula::Var(p) => p,
            _ => return None,
        };
        if b.as_not() != Some(a) {
            return None;
        }
        let s = self.sig.var_sort(p)?;
        (self.sig.canonical_var(s) == p).then(|| &**self.sig.sort_name(s))
    }

    fn go(&self, phi: &Formula, min: u8, out: &mut String) {
        let (prec, body) = self.render(phi);
        if prec < min {
            out.push('(');
            out.push_str(&body);
            out.push(')');
        } else {
            out.push_str(&body);
        }
    }

    fn sub(&self, phi: &Formula, min: u8) -> String {
        let mut s = String::new();
        self.go(phi, min, &mut s);
        s
    }

    fn args(&self, args: &[&Formula]) -> String {
        let parts: Vec<String> = args.iter().map(|a| self.sub(a, IFF)).collect();
        parts.join(", ")
    }

    fn render(&self, phi: &Formula) -> (u8, String) {
        if let Some(s) = self.bot_sort(phi) {
            return (UNARY, format!("bot@{s}"));
        }
        if let Some(s) = phi.as_not().and_then(|inner| self.bot_sort(inner)) {
            return (UNARY, format!("top@{s}"));
        }
        if let Some((a, b)) = phi.as_iff() {
            return (IFF, format!("{} <-> {}", self.sub(a, IMP), self.sub(b, IFF)));
        }
        if let Some((a, b)) = phi.as_and() {
            return (AND, format!("{} & {}", self.sub(a, AND), self.sub(b, UNARY)));
        }
        if let Some((op, args)) = phi.as_dual() {
            return (UNARY, format!("[{op}]({})", self.args(&args)));
        }
        if let Some((a, b)) = phi.as_implication() {
            return (IMP, format!("{} -> {}", self.sub(a, OR), self.sub(b, IMP)));
        }
        match phi {
            Formula::Var(v) => (UNARY, v.to_string()),
            Formula::Not(a) => (UNARY, format!("!{}", self.sub(a, UNARY))),
            Formula::Or(a, b) => (OR, format!("{} | {}", self.sub(a, OR), self.sub(b, AND))),
            Formula::App(op, args) => {
                let mut s = op.to_string();
                if !args.is_empty() {
                    let refs: Vec<&Formula> = args.iter().collect();
                    let _ = write!(s, "({})", self.args(&refs));
                }
                (UNARY, s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_signature};

    fn sig() -> Signature {
        parse_signature(
            "sort s\nsort t\nop f : s -> s\nop exec : t s -> s\nop c : -> s\nop 0 : -> t\nvar p : s\nvar q : s\nvar u : t\n",
        )
        .unwrap()
    }

    #[test]
    fn resugars() {
        let sig = sig();
        for text in [
            "p -> q | p",
            "(p -> q) -> p",
            "p -> q -> p",
            "p & q & p",
            "p & (q & p)",
            "p | (q | p)",
            "[exec](u, p) <-> !exec(u, !p)",
            "bot@s -> top@s | p",
            "exec(top@t, bot@s)",
            "!!p",
            "!(p | q)",
            "c | f(c)",
            "(p <-> q) <-> p",
        ] {
            let phi = parse_formula(&sig, text).unwrap();
            let printed = print_formula(&sig, &phi);
            assert_eq!(parse_formula(&sig, &printed).unwrap(), phi, "{text} printed as {printed}");
        }
        let phi = parse_formula(&sig, "[exec](u, p)").unwrap();
        assert_eq!(print_formula(&sig, &phi), "[exec](u, p)");
        let phi = parse_formula(&sig, "p->(q|p)").unwrap();
        assert_eq!(print_formula(&sig, &phi), "p -> q | p");
    }

    #[test]
    fn non_canonical_contradiction_is_not_bot() {
        let sig = sig();
        let phi = parse_formula(&sig, "q & !q").unwrap();
        assert_eq!(print_formula(&sig, &phi), "q & !q");
    }
}
