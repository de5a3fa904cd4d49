//! The `.mba` algebra format.
//!
//! ```text
//! atoms s = { a b c }
//! table f : ({a}, {b}) -> {a c}
//! ```
//!
//! Rows whose arguments are single atoms define `f_σ` on atom tuples; every atom
//! tuple needs a row and the table is completed additively. Rows with other
//! arguments override single entries of the completed table.

use std::fmt::Write;
use std::sync::Arc;

use super::bao::{mixed_radix, Bao, Elem};
use crate::error::{Error, Result};
use crate::syntax::{ident, split_top_level, strip_comment, OpId, Signature};

fn parse_set(bao_atoms: &[String], text: &str, line: usize) -> Result<Elem> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::syntax(line, 1, format!("expected an atom set, found `{}`", text.trim())))?;
    let mut out = 0;
    for name in inner.split_whitespace() {
        let i = bao_atoms
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::syntax(line, 1, format!("unknown atom `{name}`")))?;
        out |= 1 << i;
    }
    Ok(out)
}

struct Row {
    op: OpId,
    args: Vec<Elem>,
    value: Elem,
    line: usize,
}

/// Parses a `.mba` file over the given signature.
pub fn parse_bao(sig: Arc<Signature>, text: &str) -> Result<Bao> {
    let mut atoms: Vec<Option<Vec<String>>> = vec![None; sig.num_sorts()];
    let mut rows = Vec::new();
    let mut pending = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("atoms ") {
            let (s, set) = rest
                .split_once('=')
                .ok_or_else(|| Error::syntax(lineno, 1, "expected `atoms <sort> = { … }`"))?;
            let s = sig.sort_or_err(s.trim())?;
            let inner = set
                .trim()
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| Error::syntax(lineno, 1, "expected `{ atom … }`"))?;
            let names: Vec<String> = inner.split_whitespace().map(str::to_string).collect();
            for (j, n) in names.iter().enumerate() {
                if ident(n).is_none() {
                    return Err(Error::syntax(lineno, 1, format!("bad atom name `{n}`")));
                }
                if names[..j].contains(n) {
                    return Err(Error::syntax(lineno, 1, format!("duplicate atom `{n}`")));
                }
            }
            if atoms[s.index()].replace(names).is_some() {
                return Err(Error::syntax(lineno, 1, format!("atoms of `{}` declared twice", sig.sort_name(s))));
            }
        } else if let Some(rest) = line.strip_prefix("table ") {
            pending.push((rest.to_string(), lineno));
        } else {
            return Err(Error::syntax(lineno, 1, format!("unexpected `{line}`")));
        }
    }
    let atoms: Vec<Vec<String>> = sig
        .sorts()
        .map(|s| {
            atoms[s.index()]
                .clone()
                .ok_or_else(|| Error::Algebra(format!("no atoms declared for sort `{}`", sig.sort_name(s))))
        })
        .collect::<Result<_>>()?;
    for (rest, lineno) in pending {
        rows.push(parse_row(&sig, &atoms, &rest, lineno)?);
    }
    let single = |x: Elem| x.count_ones() == 1;
    let mut atom_rows: Vec<Vec<Option<Elem>>> = Vec::new();
    for op in sig.ops() {
        let d = sig.op_decl(op);
        let radices: Vec<usize> = d.arg_sorts.iter().map(|s| atoms[s.index()].len()).collect();
        atom_rows.push(vec![None; radices.iter().product()]);
    }
    let atom_index = |sig: &Signature, op: OpId, args: &[Elem]| -> usize {
        let d = sig.op_decl(op);
        args.iter().zip(&d.arg_sorts).fold(0, |acc, (a, s)| {
            acc * atoms[s.index()].len() + a.trailing_zeros() as usize
        })
    };
    for r in rows.iter().filter(|r| r.args.iter().all(|a| single(*a))) {
        let slot = &mut atom_rows[r.op.index()][atom_index(&sig, r.op, &r.args)];
        if slot.replace(r.value).is_some() {
            return Err(Error::syntax(r.line, 1, "duplicate table row"));
        }
    }
    for op in sig.ops() {
        if let Some(k) = atom_rows[op.index()].iter().position(Option::is_none) {
            let d = sig.op_decl(op);
            let radices: Vec<usize> = d.arg_sorts.iter().map(|s| atoms[s.index()].len()).collect();
            let t = mixed_radix(&radices).nth(k).expect("index in range");
            let names: Vec<String> = t
                .iter()
                .zip(&d.arg_sorts)
                .map(|(a, s)| format!("{{{}}}", atoms[s.index()][*a]))
                .collect();
            return Err(Error::Algebra(format!(
                "partial table: `{}` has no row for ({})",
                d.name,
                names.join(", ")
            )));
        }
    }
    let sig2 = sig.clone();
    let mut bao = Bao::from_atom_tables(sig, atoms.clone(), |op, t| {
        let d = sig2.op_decl(op);
        let k = t
            .iter()
            .zip(&d.arg_sorts)
            .fold(0, |acc, (a, s)| acc * atoms[s.index()].len() + a);
        atom_rows[op.index()][k].expect("checked total")
    })?;
    for r in rows.iter().filter(|r| !r.args.iter().all(|a| single(*a))) {
        bao.set_entry(r.op, &r.args, r.value);
    }
    Ok(bao)
}

fn parse_row(sig: &Signature, atoms: &[Vec<String>], rest: &str, line: usize) -> Result<Row> {
    let (op, body) = rest
        .split_once(':')
        .ok_or_else(|| Error::syntax(line, 1, "expected `table <op> : (…) -> {…}`"))?;
    let op = sig.op_or_err(op.trim())?;
    let d = sig.op_decl(op);
    let (args, value) = body
        .rsplit_once("->")
        .ok_or_else(|| Error::syntax(line, 1, "expected `->` in table row"))?;
    let args = args
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::syntax(line, 1, "expected a parenthesized argument list"))?;
    let parts: Vec<&str> = if args.trim().is_empty() {
        Vec::new()
    } else {
        split_top_level(args, ',')
    };
    if parts.len() != d.arity() {
        return Err(Error::syntax(
            line,
            1,
            format!("`{}` takes {} arguments, row has {}", d.name, d.arity(), parts.len()),
        ));
    }
    let args = parts
        .iter()
        .zip(&d.arg_sorts)
        .map(|(p, s)| parse_set(&atoms[s.index()], p, line))
        .collect::<Result<Vec<_>>>()?;
    let value = parse_set(&atoms[d.result_sort.index()], value, line)?;
    Ok(Row { op, args, value, line })
}

/// Renders a bao as `.mba`: all atom rows, then override rows for every entry
/// that differs from the additive completion.
pub fn write_bao(bao: &Bao) -> String {
    let sig = bao.signature().clone();
    let mut out = String::new();
    for s in sig.sorts() {
        let _ = writeln!(out, "atoms {} = {{ {} }}", sig.sort_name(s), bao.atom_names()[s.index()].join(" "));
    }
    let completed = Bao::from_atom_tables(sig.clone(), bao.atom_names().to_vec(), |op, t| {
        let args: Vec<Elem> = t.iter().map(|a| 1 << a).collect();
        bao.apply(op, &args)
    })
    .expect("same shape as an existing bao");
    let row = |out: &mut String, op: OpId, args: &[Elem]| {
        let d = sig.op_decl(op);
        let shown: Vec<String> = args.iter().zip(&d.arg_sorts).map(|(a, s)| bao.show(*s, *a)).collect();
        let _ = writeln!(
            out,
            "table {} : ({}) -> {}",
            d.name,
            shown.join(", "),
            bao.show(d.result_sort, bao.apply(op, args))
        );
    };
    for op in sig.ops() {
        let d = sig.op_decl(op);
        let radices: Vec<usize> = d.arg_sorts.iter().map(|s| bao.num_atoms(*s)).collect();
        for t in mixed_radix(&radices) {
            let args: Vec<Elem> = t.iter().map(|a| 1 << a).collect();
            row(&mut out, op, &args);
        }
    }
    for op in sig.ops() {
        for args in bao.arg_tuples(op) {
            if args.iter().all(|a| a.count_ones() == 1) {
                continue;
            }
            if bao.apply(op, &args) != completed.apply(op, &args) {
                row(&mut out, op, &args);
            }
        }
    }
    out
}
