use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned symbol name.
pub type Sym = Arc<str>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(pub u32);

impl SortId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl OpId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sort {
    pub name: Sym,
}

/// An operation symbol `σ : s1 … sn → s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDecl {
    pub name: Sym,
    pub arg_sorts: Vec<SortId>,
    pub result_sort: SortId,
}

impl OpDecl {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }
}

/// A many-sorted signature together with its sorted propositional variables.
///
/// Variables and operation symbols live in disjoint namespaces, every sort has at
/// least one variable and the first declared variable of a sort is its canonical
/// variable (used to spell out `⊥_s` and `⊤_s`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<Sort>,
    ops: Vec<OpDecl>,
    vars: Vec<Vec<Sym>>,
    sort_index: HashMap<Sym, SortId>,
    op_index: HashMap<Sym, OpId>,
    var_index: HashMap<Sym, SortId>,
}

impl Signature {
    pub fn builder() -> SignatureBuilder {
        SignatureBuilder::default()
    }

    pub fn sorts(&self) -> impl ExactSizeIterator<Item = SortId> + '_ {
        (0..self.sorts.len() as u32).map(SortId)
    }

    pub fn ops(&self) -> impl ExactSizeIterator<Item = OpId> + '_ {
        (0..self.ops.len() as u32).map(OpId)
    }

    pub fn num_sorts(&self) -> usize {
        self.sorts.len()
    }

    pub fn num_ops(&self) -> usize {
        self.ops.len()
    }

    pub fn sort_name(&self, s: SortId) -> &Sym {
        &self.sorts[s.index()].name
    }

    pub fn sort(&self, name: &str) -> Option<SortId> {
        self.sort_index.get(name).copied()
    }

    pub fn sort_or_err(&self, name: &str) -> Result<SortId> {
        self.sort(name)
            .ok_or_else(|| Error::Sort(format!("undeclared sort `{name}`")))
    }

    pub fn op(&self, name: &str) -> Option<OpId> {
        self.op_index.get(name).copied()
    }

    pub fn op_or_err(&self, name: &str) -> Result<OpId> {
        self.op(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn op_decl(&self, op: OpId) -> &OpDecl {
        &self.ops[op.index()]
    }

    pub fn decl(&self, name: &str) -> Result<&OpDecl> {
        self.op_or_err(name).map(|op| self.op_decl(op))
    }

    /// The sort of a declared variable.
    pub fn var_sort(&self, name: &str) -> Option<SortId> {
        self.var_index.get(name).copied()
    }

    pub fn vars_of(&self, s: SortId) -> &[Sym] {
        &self.vars[s.index()]
    }

    pub fn all_vars(&self) -> impl Iterator<Item = (&Sym, SortId)> + '_ {
        self.sorts()
            .flat_map(move |s| self.vars[s.index()].iter().map(move |v| (v, s)))
    }

    /// The canonical (first declared) variable of a sort.
    pub fn canonical_var(&self, s: SortId) -> &Sym {
        &self.vars[s.index()][0]
    }

    /// A copy of this signature with extra variables added, used to sort-check
    /// scheme templates whose metavariables behave like fresh variables.
    pub fn with_extra_vars<'a>(
        &self,
        extra: impl IntoIterator<Item = (&'a str, SortId)>,
    ) -> Result<Signature> {
        let mut sig = self.clone();
        for (name, sort) in extra {
            sig.insert_var(name, sort)?;
        }
        Ok(sig)
    }

    fn insert_var(&mut self, name: &str, sort: SortId) -> Result<()> {
        if self.op_index.contains_key(name) {
            return Err(Error::Signature(format!(
                "`{name}` is already an operation symbol"
            )));
        }
        if let Some(prev) = self.var_index.get(name) {
            return Err(Error::Signature(format!(
                "variable `{name}` already declared at sort `{}`",
                self.sort_name(*prev)
            )));
        }
        let sym: Sym = Arc::from(name);
        self.vars[sort.index()].push(sym.clone());
        self.var_index.insert(sym, sort);
        Ok(())
    }

    /// Renders the signature in `.msig` syntax.
    pub fn to_msig(&self) -> String {
        let mut out = String::new();
        for s in self.sorts() {
            out.push_str(&format!("sort {}\n", self.sort_name(s)));
        }
        for op in &self.ops {
            let args: Vec<&str> = op
                .arg_sorts
                .iter()
                .map(|s| &**self.sort_name(*s))
                .collect();
            let args = if args.is_empty() {
                String::new()
            } else {
                format!("{} ", args.join(" "))
            };
            out.push_str(&format!(
                "op {} : {}-> {}\n",
                op.name,
                args,
                self.sort_name(op.result_sort)
            ));
        }
        for s in self.sorts() {
            for v in self.vars_of(s) {
                out.push_str(&format!("var {} : {}\n", v, self.sort_name(s)));
            }
        }
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_msig())
    }
}

/// Incremental construction of a [`Signature`]; [`SignatureBuilder::finish`] checks
/// the global invariants.
#[derive(Debug, Default)]
pub struct SignatureBuilder {
    sig: Option<Signature>,
}

impl SignatureBuilder {
    fn sig(&mut self) -> &mut Signature {
        self.sig.get_or_insert_with(|| Signature {
            sorts: Vec::new(),
            ops: Vec::new(),
            vars: Vec::new(),
            sort_index: HashMap::new(),
            op_index: HashMap::new(),
            var_index: HashMap::new(),
        })
    }

    pub fn sort(&mut self, name: &str) -> Result<SortId> {
        let sig = self.sig();
        if sig.sort_index.contains_key(name) {
            return Err(Error::Signature(format!("duplicate sort `{name}`")));
        }
        let id = SortId(sig.sorts.len() as u32);
        let sym: Sym = Arc::from(name);
        sig.sorts.push(Sort { name: sym.clone() });
        sig.vars.push(Vec::new());
        sig.sort_index.insert(sym, id);
        Ok(id)
    }

    pub fn op(&mut self, name: &str, args: &[&str], result: &str) -> Result<OpId> {
        let sig = self.sig();
        if sig.op_index.contains_key(name) {
            return Err(Error::Signature(format!("duplicate operation `{name}`")));
        }
        if sig.var_index.contains_key(name) {
            return Err(Error::Signature(format!(
                "`{name}` is already a variable"
            )));
        }
        let arg_sorts = args
            .iter()
            .map(|a| sig.sort_or_err(a))
            .collect::<Result<Vec<_>>>()?;
        let result_sort = sig.sort_or_err(result)?;
        let id = OpId(sig.ops.len() as u32);
        let sym: Sym = Arc::from(name);
        sig.ops.push(OpDecl {
            name: sym.clone(),
            arg_sorts,
            result_sort,
        });
        sig.op_index.insert(sym, id);
        Ok(id)
    }

    pub fn var(&mut self, name: &str, sort: &str) -> Result<()> {
        let sig = self.sig();
        let s = sig.sort_or_err(sort)?;
        sig.insert_var(name, s)
    }

    pub fn finish(mut self) -> Result<Signature> {
        let sig = self.sig().clone();
        for s in sig.sorts() {
            if sig.vars[s.index()].is_empty() {
                return Err(Error::Signature(format!(
                    "sort `{}` has no variables",
                    sig.sort_name(s)
                )));
            }
        }
        Ok(sig)
    }
}

/// Parses the line-oriented `.msig` format:
///
/// ```text
/// sort <ident>
/// op <ident> : <ident>* -> <ident>
/// var <ident> : <ident>
/// ```
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut b = Signature::builder();
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let err = |msg: String| Error::syntax(lineno, 1, msg);
        let (kw, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("incomplete declaration `{line}`")))?;
        let rest = rest.trim();
        match kw {
            "sort" => {
                let name = ident(rest).ok_or_else(|| err(format!("bad sort name `{rest}`")))?;
                b.sort(name)?;
            }
            "var" => {
                let (name, sort) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `var <ident> : <sort>`".into()))?;
                let name = ident(name.trim())
                    .ok_or_else(|| err(format!("bad variable name `{}`", name.trim())))?;
                let sort = ident(sort.trim())
                    .ok_or_else(|| err(format!("bad sort name `{}`", sort.trim())))?;
                b.var(name, sort)?;
            }
            "op" => {
                let (name, rest) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `op <ident> : <sorts> -> <sort>`".into()))?;
                let name = ident(name.trim())
                    .ok_or_else(|| err(format!("bad operation name `{}`", name.trim())))?;
                let (args, result) = rest
                    .split_once("->")
                    .ok_or_else(|| err("expected `->` in operation declaration".into()))?;
                let args: Vec<&str> = args.split_whitespace().collect();
                for a in &args {
                    ident(a).ok_or_else(|| err(format!("bad sort name `{a}`")))?;
                }
                let result = ident(result.trim())
                    .ok_or_else(|| err(format!("bad sort name `{}`", result.trim())))?;
                b.op(name, &args, result)?;
            }
            other => return Err(err(format!("unknown declaration `{other}`"))),
        }
    }
    b.finish()
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Returns `s` if it is a well-formed identifier.
pub(crate) fn ident(s: &str) -> Option<&str> {
    (!s.is_empty() && s.chars().all(is_ident_char)).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_signature() {
        let sig = parse_signature("sort s\nvar p : s").unwrap();
        assert_eq!(sig.num_sorts(), 1);
        let s = sig.sort("s").unwrap();
        assert_eq!(sig.vars_of(s), &[Arc::from("p")]);
        assert_eq!(&**sig.canonical_var(s), "p");
    }

    #[test]
    fn undeclared_sort_and_duplicate_variable() {
        let err = parse_signature("sort s\nvar p : s\nvar p : t").unwrap_err();
        assert!(matches!(err, Error::Sort(_)), "{err}");
        let err = parse_signature("sort s\nsort t\nvar p : s\nvar p : t").unwrap_err();
        assert!(matches!(err, Error::Signature(_)), "{err}");
    }

    #[test]
    fn empty_variable_set_rejected() {
        let err = parse_signature("sort s\nsort t\nvar p : s").unwrap_err();
        assert!(err.to_string().contains("no variables"));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(parse_signature("sort s\nsort s\nvar p : s").is_err());
        assert!(parse_signature("sort s\nvar p : s\nop f : s -> s\nop f : -> s").is_err());
        // shared namespace between variables and operations
        assert!(parse_signature("sort s\nvar p : s\nop p : -> s").is_err());
    }

    #[test]
    fn ops_and_comments() {
        let sig = parse_signature(
            "# a comment\nsort s\nsort t   # trailing\nop f : s t -> s\nop c : -> t\nvar p : s\nvar q : t\n",
        )
        .unwrap();
        let f = sig.decl("f").unwrap();
        assert_eq!(f.arity(), 2);
        assert_eq!(sig.decl("c").unwrap().arity(), 0);
        let round = parse_signature(&sig.to_msig()).unwrap();
        assert_eq!(round, sig);
    }
}
