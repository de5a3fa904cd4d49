//! The `.mpf` proof format and `.mfm` formula lists.
//!
//! ```text
//! mode global [hyps H.mfm]
//! mode local <sort> [hyps H.mfm] [witnesses 2 5]
//! hyp <formula>            # inline hypothesis, appended after those of the file
//! goal <formula>           # optional expected conclusion
//! <n>. <formula> ; <justification>
//! ```
//!
//! Justifications: `taut`, `axiom <name> {M := f, …}`, `k <op> <i> {…}`,
//! `dual <op> {…}`, `norm <op> <i> {…}`, `add <op> <i> {…}`, `hyp`, `mp <j> <k>`,
//! `ug <op> <i> <j> [f, …]`, `mono <op> <i> <j> [f, …]`.

use std::fmt::Write;
use std::sync::Arc;

use super::check::{Justification, Mode, Proof, ProofStep};
use super::scheme::Binding;
use crate::error::{Error, Result};
use crate::syntax::{
    ident, parse_formula_at, print_formula, split_top_level, strip_comment, Formula, Signature, Sym,
};

/// Parses a `.mfm` file: one formula per nonempty line.
pub fn parse_formula_list(sig: &Signature, text: &str) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if !line.is_empty() {
            out.push(parse_formula_at(sig, line, i + 1)?);
        }
    }
    Ok(out)
}

fn parse_binding(sig: &Signature, text: &str, line: usize) -> Result<Binding> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::syntax(line, 1, "expected `{ M := formula, … }`"))?;
    let mut b = Binding::new();
    if inner.trim().is_empty() {
        return Ok(b);
    }
    for item in split_top_level(inner, ',') {
        let (m, f) = item
            .split_once(":=")
            .ok_or_else(|| Error::syntax(line, 1, format!("expected `M := formula` in `{}`", item.trim())))?;
        let m = ident(m.trim()).ok_or_else(|| Error::syntax(line, 1, format!("bad metavariable `{}`", m.trim())))?;
        if b.insert(Arc::from(m), parse_formula_at(sig, f.trim(), line)?).is_some() {
            return Err(Error::syntax(line, 1, format!("metavariable `{m}` bound twice")));
        }
    }
    Ok(b)
}

fn parse_sides(sig: &Signature, text: &str, line: usize) -> Result<Vec<Formula>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::syntax(line, 1, "expected `[f, …]`"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(inner, ',')
        .into_iter()
        .map(|f| parse_formula_at(sig, f.trim(), line))
        .collect()
}

fn num(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::syntax(line, 1, format!("expected {what}")))
}

/// Splits `text` into its first `n` whitespace-separated words and the remainder.
fn words(text: &str, n: usize) -> (Vec<&str>, &str) {
    let mut rest = text.trim_start();
    let mut out = Vec::new();
    for _ in 0..n {
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let end = rest[..end].find(['{', '[']).unwrap_or(end);
        if end == 0 {
            break;
        }
        out.push(&rest[..end]);
        rest = rest[end..].trim_start();
    }
    (out, rest)
}

fn parse_justification(sig: &Signature, text: &str, line: usize) -> Result<Justification> {
    let text = text.trim();
    let (kw, _) = words(text, 1);
    let kw = kw.first().copied().unwrap_or("");
    let sym = |s: &str| -> Sym { Arc::from(s) };
    Ok(match kw {
        "taut" => Justification::Taut,
        "hyp" => Justification::Hyp,
        "mp" => {
            let (w, _) = words(text, 3);
            Justification::Mp {
                minor: num(w.get(1).copied(), line, "step number")?,
                major: num(w.get(2).copied(), line, "step number")?,
            }
        }
        "axiom" => {
            let (w, rest) = words(text, 2);
            let name = w.get(1).ok_or_else(|| Error::syntax(line, 1, "expected scheme name"))?;
            Justification::Axiom {
                name: sym(name),
                binding: parse_binding(sig, rest, line)?,
            }
        }
        "dual" => {
            let (w, rest) = words(text, 2);
            let op = w.get(1).ok_or_else(|| Error::syntax(line, 1, "expected operation"))?;
            Justification::Dual {
                op: sym(op),
                binding: parse_binding(sig, rest, line)?,
            }
        }
        "k" | "norm" | "add" => {
            let (w, rest) = words(text, 3);
            let op = sym(w.get(1).ok_or_else(|| Error::syntax(line, 1, "expected operation"))?);
            let pos = num(w.get(2).copied(), line, "argument position")?;
            let binding = parse_binding(sig, rest, line)?;
            match kw {
                "k" => Justification::K { op, pos, binding },
                "norm" => Justification::Norm { op, pos, binding },
                _ => Justification::Add { op, pos, binding },
            }
        }
        "ug" | "mono" => {
            let (w, rest) = words(text, 4);
            let op = sym(w.get(1).ok_or_else(|| Error::syntax(line, 1, "expected operation"))?);
            let pos = num(w.get(2).copied(), line, "argument position")?;
            let premise = num(w.get(3).copied(), line, "step number")?;
            let sides = parse_sides(sig, rest, line)?;
            if kw == "ug" {
                Justification::Ug { op, pos, premise, sides }
            } else {
                Justification::Mono { op, pos, premise, sides }
            }
        }
        other => return Err(Error::syntax(line, 1, format!("unknown justification `{other}`"))),
    })
}

/// Parses a `.mpf` proof. `load` resolves file names referenced by `hyps`.
pub fn parse_proof(sig: &Signature, text: &str, load: &dyn Fn(&str) -> Result<String>) -> Result<Proof> {
    let mut mode: Option<Mode> = None;
    let mut inline_hyps = Vec::new();
    let mut goal = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix("mode ") {
            if mode.is_some() {
                return Err(Error::syntax(lineno, 1, "duplicate mode line"));
            }
            mode = Some(parse_mode(sig, rest, lineno, load)?);
        } else if let Some(rest) = line.strip_prefix("hyp ") {
            inline_hyps.push(parse_formula_at(sig, rest.trim(), lineno)?);
        } else if let Some(rest) = line.strip_prefix("goal ") {
            goal = Some(parse_formula_at(sig, rest.trim(), lineno)?);
        } else {
            let (n, rest) = line
                .split_once('.')
                .ok_or_else(|| Error::syntax(lineno, 1, "expected `<n>. <formula> ; <justification>`"))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::syntax(lineno, 1, format!("bad step number `{}`", n.trim())))?;
            if n != steps.len() + 1 {
                return Err(Error::syntax(lineno, 1, format!("expected step {}, found {n}", steps.len() + 1)));
            }
            let (formula, just) = rest
                .split_once(';')
                .ok_or_else(|| Error::syntax(lineno, 1, "missing `;` before the justification"))?;
            steps.push(ProofStep {
                formula: parse_formula_at(sig, formula.trim(), lineno)?,
                just: parse_justification(sig, just, lineno)?,
            });
        }
    }
    let mut mode = mode.ok_or_else(|| Error::syntax(1, 1, "missing `mode` line"))?;
    match &mut mode {
        Mode::Local { hyps, .. } | Mode::Global { hyps } => hyps.extend(inline_hyps),
    }
    Ok(Proof { mode, steps, goal })
}

fn parse_mode(sig: &Signature, rest: &str, line: usize, load: &dyn Fn(&str) -> Result<String>) -> Result<Mode> {
    let mut toks = rest.split_whitespace();
    let kind = toks.next();
    let sort = match kind {
        Some("global") => None,
        Some("local") => {
            let s = toks.next().ok_or_else(|| Error::syntax(line, 1, "expected sort after `local`"))?;
            Some(sig.sort_or_err(s)?)
        }
        _ => return Err(Error::syntax(line, 1, "expected `global` or `local`")),
    };
    let mut hyps = Vec::new();
    let mut witnesses = Vec::new();
    let mut in_witnesses = false;
    while let Some(t) = toks.next() {
        match t {
            "hyps" => {
                let file = toks.next().ok_or_else(|| Error::syntax(line, 1, "expected file after `hyps`"))?;
                hyps.extend(parse_formula_list(sig, &load(file)?)?);
                in_witnesses = false;
            }
            "witnesses" if sort.is_some() => in_witnesses = true,
            n if in_witnesses => witnesses.push(
                n.parse()
                    .map_err(|_| Error::syntax(line, 1, format!("bad witness index `{n}`")))?,
            ),
            other => return Err(Error::syntax(line, 1, format!("unexpected `{other}` in mode line"))),
        }
    }
    Ok(match sort {
        None => Mode::Global { hyps },
        Some(sort) => Mode::Local { sort, hyps, witnesses },
    })
}

fn write_binding(sig: &Signature, b: &Binding) -> String {
    let parts: Vec<String> = b
        .iter()
        .map(|(m, f)| format!("{m} := {}", print_formula(sig, f)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn write_sides(sig: &Signature, sides: &[Formula]) -> String {
    let parts: Vec<String> = sides.iter().map(|f| print_formula(sig, f)).collect();
    format!("[{}]", parts.join(", "))
}

/// The `.mpf` text of a justification.
pub fn write_justification(sig: &Signature, j: &Justification) -> String {
    match j {
        Justification::Taut => "taut".into(),
        Justification::Hyp => "hyp".into(),
        Justification::Mp { minor, major } => format!("mp {minor} {major}"),
        Justification::Axiom { name, binding } => format!("axiom {name} {}", write_binding(sig, binding)),
        Justification::K { op, pos, binding } => format!("k {op} {pos} {}", write_binding(sig, binding)),
        Justification::Dual { op, binding } => format!("dual {op} {}", write_binding(sig, binding)),
        Justification::Norm { op, pos, binding } => format!("norm {op} {pos} {}", write_binding(sig, binding)),
        Justification::Add { op, pos, binding } => format!("add {op} {pos} {}", write_binding(sig, binding)),
        Justification::Ug { op, pos, premise, sides } => {
            format!("ug {op} {pos} {premise} {}", write_sides(sig, sides))
        }
        Justification::Mono { op, pos, premise, sides } => {
            format!("mono {op} {pos} {premise} {}", write_sides(sig, sides))
        }
    }
}

/// Renders a proof as self-contained `.mpf` text (hypotheses inline).
pub fn write_proof(sig: &Signature, proof: &Proof) -> String {
    let mut out = String::new();
    let hyps = match &proof.mode {
        Mode::Global { hyps } => {
            out.push_str("mode global\n");
            hyps
        }
        Mode::Local { sort, hyps, witnesses } => {
            let _ = write!(out, "mode local {}", sig.sort_name(*sort));
            if !witnesses.is_empty() {
                out.push_str(" witnesses");
                for w in witnesses {
                    let _ = write!(out, " {w}");
                }
            }
            out.push('\n');
            hyps
        }
    };
    for h in hyps {
        let _ = writeln!(out, "hyp {}", print_formula(sig, h));
    }
    if let Some(g) = &proof.goal {
        let _ = writeln!(out, "goal {}", print_formula(sig, g));
    }
    for (i, s) in proof.steps.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}. {} ; {}",
            i + 1,
            print_formula(sig, &s.formula),
            write_justification(sig, &s.just)
        );
    }
    out
}
