use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::{
    ident, parse_formula_at, print_formula, split_top_level, strip_comment, Formula, OpDecl, Signature, SortId, Sym,
};

/// Assignment of formulas to the metavariables of a scheme.
pub type Binding = BTreeMap<Sym, Formula>;

/// Side-condition predicates over metavariable bindings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardKind {
    /// `intadd(N, N1, N2)`: numerals with `N = N1 + N2`.
    IntAdd,
    /// `leqtruth(T, N1, N2)`: `T` is `true` iff `N1 ≤ N2`, else `false`.
    LeqTruth,
    /// `distinct(X, Y)`: ground constructor terms that differ syntactically.
    Distinct,
    /// `is_bot(X)`: `X` is `⊥` of its sort.
    IsBot,
    /// `nat(N)`: a numeral.
    Nat,
}

impl GuardKind {
    pub fn name(self) -> &'static str {
        match self {
            GuardKind::IntAdd => "intadd",
            GuardKind::LeqTruth => "leqtruth",
            GuardKind::Distinct => "distinct",
            GuardKind::IsBot => "is_bot",
            GuardKind::Nat => "nat",
        }
    }

    fn arity(self) -> usize {
        match self {
            GuardKind::IntAdd | GuardKind::LeqTruth => 3,
            GuardKind::Distinct => 2,
            GuardKind::IsBot | GuardKind::Nat => 1,
        }
    }

    fn from_name(name: &str) -> Option<GuardKind> {
        [
            GuardKind::IntAdd,
            GuardKind::LeqTruth,
            GuardKind::Distinct,
            GuardKind::IsBot,
            GuardKind::Nat,
        ]
        .into_iter()
        .find(|g| g.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Guard {
    pub kind: GuardKind,
    pub args: Vec<Sym>,
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<&str> = self.args.iter().map(|a| &**a).collect();
        write!(f, "{}({})", self.kind.name(), args.join(", "))
    }
}

/// The value of a numeral constant such as `0`, `12`.
pub fn numeral(f: &Formula) -> Option<u64> {
    match f {
        Formula::App(op, args) if args.is_empty() && op.bytes().all(|b| b.is_ascii_digit()) => op.parse().ok(),
        _ => None,
    }
}

fn truth(f: &Formula) -> Option<bool> {
    match f {
        Formula::App(op, args) if args.is_empty() => match &**op {
            "true" => Some(true),
            "false" => Some(false),
            _ => None,
        },
        _ => None,
    }
}

/// A term built from operation symbols only (no variables, no boolean connectives).
pub fn is_ground_term(f: &Formula) -> bool {
    match f {
        Formula::App(_, args) => args.iter().all(is_ground_term),
        _ => false,
    }
}

/// Evaluates a guard under a binding.
pub fn check_guard(sig: &Signature, guard: &Guard, binding: &Binding) -> Result<()> {
    let fail = |msg: String| Error::Guard {
        guard: guard.to_string(),
        msg,
    };
    let args = guard
        .args
        .iter()
        .map(|a| binding.get(a).ok_or_else(|| fail(format!("metavariable `{a}` is unbound"))))
        .collect::<Result<Vec<_>>>()?;
    let show = |f: &Formula| print_formula(sig, f);
    let nat = |f: &Formula| numeral(f).ok_or_else(|| fail(format!("`{}` is not a numeral", show(f))));
    match guard.kind {
        GuardKind::IntAdd => {
            let (n, n1, n2) = (nat(args[0])?, nat(args[1])?, nat(args[2])?);
            if n1.checked_add(n2) != Some(n) {
                return Err(fail(format!("{n} is not {n1} + {n2}")));
            }
        }
        GuardKind::LeqTruth => {
            let t = truth(args[0]).ok_or_else(|| fail(format!("`{}` is not a truth value", show(args[0]))))?;
            let (n1, n2) = (nat(args[1])?, nat(args[2])?);
            if t != (n1 <= n2) {
                return Err(fail(format!("`{}` is not the truth value of {n1} <= {n2}", show(args[0]))));
            }
        }
        GuardKind::Distinct => {
            for a in &args {
                if !is_ground_term(a) {
                    return Err(fail(format!("`{}` is not a ground term", show(a))));
                }
            }
            if args[0] == args[1] {
                return Err(fail(format!("both sides are `{}`", show(args[0]))));
            }
        }
        GuardKind::IsBot => {
            let s = sig.sort_of(args[0])?;
            if *args[0] != sig.mk_bot(s) {
                return Err(fail(format!("`{}` is not bot@{}", show(args[0]), sig.sort_name(s))));
            }
        }
        GuardKind::Nat => {
            nat(args[0])?;
        }
    }
    Ok(())
}

/// A named axiom scheme: a template over metavariables plus side conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomScheme {
    pub name: Sym,
    pub metavars: Vec<(Sym, SortId)>,
    pub guards: Vec<Guard>,
    pub template: Formula,
}

fn check_binding(sig: &Signature, metavars: &[(Sym, SortId)], binding: &Binding, what: &str) -> Result<()> {
    for (m, s) in metavars {
        let f = binding
            .get(m)
            .ok_or_else(|| Error::Scheme(format!("{what}: metavariable `{m}` is unbound")))?;
        let got = sig.sort_of(f)?;
        if got != *s {
            return Err(Error::Sort(format!(
                "{what}: `{m}` has sort `{}` but is bound to a formula of sort `{}`",
                sig.sort_name(*s),
                sig.sort_name(got)
            )));
        }
    }
    for k in binding.keys() {
        if !metavars.iter().any(|(m, _)| m == k) {
            return Err(Error::Scheme(format!("{what}: `{k}` is not a metavariable")));
        }
    }
    Ok(())
}

impl AxiomScheme {
    /// Builds a scheme, sort-checking the template against `sig` extended by the
    /// metavariables.
    pub fn new(
        sig: &Signature,
        name: &str,
        metavars: Vec<(Sym, SortId)>,
        guards: Vec<Guard>,
        template: Formula,
    ) -> Result<AxiomScheme> {
        let ext = sig.with_extra_vars(metavars.iter().map(|(m, s)| (&**m, *s)))?;
        ext.sort_of(&template)?;
        for g in &guards {
            if g.args.len() != g.kind.arity() {
                return Err(Error::Scheme(format!(
                    "guard `{}` of `{name}` expects {} arguments",
                    g.kind.name(),
                    g.kind.arity()
                )));
            }
            for a in &g.args {
                if !metavars.iter().any(|(m, _)| m == a) {
                    return Err(Error::Scheme(format!("guard argument `{a}` of `{name}` is not a metavariable")));
                }
            }
        }
        Ok(AxiomScheme {
            name: Arc::from(name),
            metavars,
            guards,
            template,
        })
    }

    /// Sorted uniform substitution of the binding into the template, after
    /// checking all guards.
    pub fn instantiate(&self, sig: &Signature, binding: &Binding) -> Result<Formula> {
        check_binding(sig, &self.metavars, binding, &self.name)?;
        for g in &self.guards {
            check_guard(sig, g, binding)?;
        }
        Ok(self.template.replace_vars(binding))
    }

    /// Renders the scheme as one `.max` line.
    pub fn to_max(&self, sig: &Signature) -> String {
        let ext = sig
            .with_extra_vars(self.metavars.iter().map(|(m, s)| (&**m, *s)))
            .expect("metavariables were checked at construction");
        let mut out = format!("scheme {}", self.name);
        for (m, s) in &self.metavars {
            out.push_str(&format!(" meta {m} : {}", sig.sort_name(*s)));
        }
        for g in &self.guards {
            out.push_str(&format!(" guard {g}"));
        }
        out.push_str(" ::= ");
        out.push_str(&print_formula(&ext, &self.template));
        out
    }
}

/// Which primitive modal axioms and rules are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// `K^i_σ`, `Dual_σ` and universal generalization.
    Standard,
    /// `Norm^i_σ`, `Add^i_σ` and the monotonicity rule.
    Alternative,
}

/// The schemes `Λ` of a normal modal logic `KΛ` together with the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSet {
    pub basis: Basis,
    schemes: Vec<AxiomScheme>,
}

impl AxiomSet {
    pub fn new(basis: Basis) -> AxiomSet {
        AxiomSet {
            basis,
            schemes: Vec::new(),
        }
    }

    pub fn add(&mut self, scheme: AxiomScheme) -> Result<()> {
        if self.get(&scheme.name).is_some() {
            return Err(Error::Scheme(format!("duplicate scheme `{}`", scheme.name)));
        }
        self.schemes.push(scheme);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&AxiomScheme> {
        self.schemes.iter().find(|s| &*s.name == name)
    }

    pub fn schemes(&self) -> &[AxiomScheme] {
        &self.schemes
    }

    pub fn to_max(&self, sig: &Signature) -> String {
        let mut out = format!(
            "basis {}\n",
            match self.basis {
                Basis::Standard => "standard",
                Basis::Alternative => "alternative",
            }
        );
        for s in &self.schemes {
            out.push_str(&s.to_max(sig));
            out.push('\n');
        }
        out
    }
}

/// Parses a `.max` file:
///
/// ```text
/// basis standard|alternative
/// scheme <name> [meta <M> : <sort>]* [guard <pred>(<M>, …)]* ::= <formula>
/// ```
pub fn parse_axioms(sig: &Signature, text: &str) -> Result<AxiomSet> {
    let mut set = AxiomSet::new(Basis::Standard);
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kw {
            "basis" => {
                set.basis = match rest.trim() {
                    "standard" => Basis::Standard,
                    "alternative" => Basis::Alternative,
                    other => return Err(Error::syntax(lineno, 7, format!("unknown basis `{other}`"))),
                }
            }
            "scheme" => set.add(parse_scheme_line(sig, rest, lineno)?)?,
            other => return Err(Error::syntax(lineno, 1, format!("unknown declaration `{other}`"))),
        }
    }
    Ok(set)
}

fn parse_scheme_line(sig: &Signature, rest: &str, lineno: usize) -> Result<AxiomScheme> {
    let err = |msg: String| Error::syntax(lineno, 1, msg);
    let (head, body) = rest
        .split_once("::=")
        .ok_or_else(|| err("expected `::=` in scheme".into()))?;
    let mut toks = head.split_whitespace().peekable();
    let name = toks
        .next()
        .and_then(ident)
        .ok_or_else(|| err("expected scheme name".into()))?;
    let mut metavars = Vec::new();
    let mut guards = Vec::new();
    while let Some(tok) = toks.next() {
        match tok {
            "meta" => {
                let m = toks.next().and_then(ident).ok_or_else(|| err("expected metavariable name".into()))?;
                if toks.next() != Some(":") {
                    return Err(err(format!("expected `:` after metavariable `{m}`")));
                }
                let sort = toks.next().ok_or_else(|| err("expected sort".into()))?;
                metavars.push((Arc::from(m), sig.sort_or_err(sort)?));
            }
            "guard" => {
                // the guard may contain spaces after commas; collect up to `)`
                let mut text = String::from(toks.next().ok_or_else(|| err("expected guard".into()))?);
                while !text.contains(')') {
                    let more = toks.next().ok_or_else(|| err("unterminated guard".into()))?;
                    text.push_str(more);
                }
                let (pred, args) = text
                    .split_once('(')
                    .ok_or_else(|| err(format!("bad guard `{text}`")))?;
                let kind = GuardKind::from_name(pred).ok_or_else(|| err(format!("unknown guard `{pred}`")))?;
                let args = args
                    .strip_suffix(')')
                    .ok_or_else(|| err(format!("bad guard `{text}`")))?;
                let args = split_top_level(args, ',')
                    .into_iter()
                    .map(|a| Arc::from(a.trim()))
                    .collect();
                guards.push(Guard { kind, args });
            }
            other => return Err(err(format!("unexpected `{other}` in scheme header"))),
        }
    }
    let ext = sig.with_extra_vars(metavars.iter().map(|(m, s): &(Sym, SortId)| (&**m, *s)))?;
    let template = parse_formula_at(&ext, body.trim(), lineno)?;
    AxiomScheme::new(sig, name, metavars, guards, template)
}

// ---- built-in schemes -----------------------------------------------------

fn psi(j: usize) -> Sym {
    Arc::from(format!("PSI{j}"))
}

fn phi_chi() -> (Sym, Sym) {
    (Arc::from("PHI"), Arc::from("CHI"))
}

fn op_decl<'a>(sig: &'a Signature, op: &str) -> Result<&'a OpDecl> {
    sig.decl(op)
}

fn position(decl: &OpDecl, pos: usize) -> Result<()> {
    if pos == 0 || pos > decl.arity() {
        return Err(Error::Scheme(format!(
            "position {pos} is out of range for `{}` of arity {}",
            decl.name,
            decl.arity()
        )));
    }
    Ok(())
}

/// Metavariables of `K^i_σ`: `PSIj` for `j ≠ i`, `PHI`, `CHI`.
pub fn k_metavars(sig: &Signature, op: &str, pos: usize) -> Result<Vec<(Sym, SortId)>> {
    let decl = op_decl(sig, op)?;
    position(decl, pos)?;
    let (phi, chi) = phi_chi();
    let mut out: Vec<(Sym, SortId)> = decl
        .arg_sorts
        .iter()
        .enumerate()
        .filter(|(j, _)| j + 1 != pos)
        .map(|(j, s)| (psi(j + 1), *s))
        .collect();
    out.push((phi, decl.arg_sorts[pos - 1]));
    out.push((chi, decl.arg_sorts[pos - 1]));
    Ok(out)
}

fn with_at(binding: &Binding, arity: usize, pos: usize, f: Formula) -> Vec<Formula> {
    (1..=arity)
        .map(|j| if j == pos { f.clone() } else { binding[&psi(j)].clone() })
        .collect()
}

/// `K^i_σ`: `σ□(…, φ→χ, …) → (σ□(…, φ, …) → σ□(…, χ, …))`.
pub fn k_instance(sig: &Signature, op: &str, pos: usize, binding: &Binding) -> Result<Formula> {
    let decl = op_decl(sig, op)?;
    check_binding(sig, &k_metavars(sig, op, pos)?, binding, &format!("k {op} {pos}"))?;
    let (phi, chi) = phi_chi();
    let (phi, chi) = (binding[&phi].clone(), binding[&chi].clone());
    let n = decl.arity();
    let b = |f: Formula| Formula::dual(op, with_at(binding, n, pos, f));
    Ok(b(phi.clone().implies(chi.clone())).implies(b(phi).implies(b(chi))))
}

/// Metavariables of `Dual_σ`: `PSI1 … PSIn`.
pub fn dual_metavars(sig: &Signature, op: &str) -> Result<Vec<(Sym, SortId)>> {
    let decl = op_decl(sig, op)?;
    if decl.arity() == 0 {
        return Err(Error::Scheme(format!("`{op}` is nullary and has no dual axiom")));
    }
    Ok(decl.arg_sorts.iter().enumerate().map(|(j, s)| (psi(j + 1), *s)).collect())
}

/// `Dual_σ`: `σ(ψ1, …, ψn) ↔ ¬σ□(¬ψ1, …, ¬ψn)`.
pub fn dual_instance(sig: &Signature, op: &str, binding: &Binding) -> Result<Formula> {
    let metas = dual_metavars(sig, op)?;
    check_binding(sig, &metas, binding, &format!("dual {op}"))?;
    let args: Vec<Formula> = metas.iter().map(|(m, _)| binding[m].clone()).collect();
    let negs: Vec<Formula> = args.iter().cloned().map(Formula::not).collect();
    Ok(Formula::app(op, args).iff(Formula::dual(op, negs).not()))
}

/// `Norm^i_σ`: `σ(ψ1, …, ψn) ↔ ⊥_s` provided `ψi = ⊥_{si}`.
pub fn norm_instance(sig: &Signature, op: &str, pos: usize, binding: &Binding) -> Result<Formula> {
    let decl = op_decl(sig, op)?;
    position(decl, pos)?;
    let metas = dual_metavars(sig, op)?;
    check_binding(sig, &metas, binding, &format!("norm {op} {pos}"))?;
    check_guard(
        sig,
        &Guard {
            kind: GuardKind::IsBot,
            args: vec![psi(pos)],
        },
        binding,
    )?;
    let args: Vec<Formula> = metas.iter().map(|(m, _)| binding[m].clone()).collect();
    Ok(Formula::app(op, args).iff(sig.mk_bot(decl.result_sort)))
}

/// `Add^i_σ`: `σ(…, φ∨χ, …) ↔ (σ(…, φ, …) ∨ σ(…, χ, …))`.
pub fn add_instance(sig: &Signature, op: &str, pos: usize, binding: &Binding) -> Result<Formula> {
    let decl = op_decl(sig, op)?;
    check_binding(sig, &k_metavars(sig, op, pos)?, binding, &format!("add {op} {pos}"))?;
    let (phi, chi) = phi_chi();
    let (phi, chi) = (binding[&phi].clone(), binding[&chi].clone());
    let n = decl.arity();
    let a = |f: Formula| Formula::app(op, with_at(binding, n, pos, f));
    Ok(a(phi.clone().or(chi.clone())).iff(a(phi).or(a(chi))))
}

/// Convenience constructor for bindings.
pub fn binding<'a>(pairs: impl IntoIterator<Item = (&'a str, Formula)>) -> Binding {
    pairs.into_iter().map(|(k, v)| (Arc::from(k), v)).collect()
}

/// Binding for `K^i_σ` from side formulas (all positions but `pos`), `φ` and `χ`.
pub fn k_binding(sides: &[Formula], pos: usize, phi: Formula, chi: Formula) -> Binding {
    let mut b = side_binding(sides, pos);
    b.insert(Arc::from("PHI"), phi);
    b.insert(Arc::from("CHI"), chi);
    b
}

/// Binding `PSIj ↦ sides` skipping position `pos` (1-based; 0 skips nothing).
pub fn side_binding(sides: &[Formula], pos: usize) -> Binding {
    let mut b = Binding::new();
    let mut j = 1;
    for f in sides {
        if j == pos {
            j += 1;
        }
        b.insert(psi(j), f.clone());
        j += 1;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_signature};

    fn sig() -> Signature {
        parse_signature(
            "sort s\nsort Nat\nsort Bool\nop f : s -> s\nop g : s s -> s\nop 1 : -> Nat\nop 2 : -> Nat\nop 3 : -> Nat\nop 4 : -> Nat\nop true : -> Bool\nop false : -> Bool\nvar p : s\nvar q : s\nvar n : Nat\nvar b : Bool\n",
        )
        .unwrap()
    }

    fn f(sig: &Signature, t: &str) -> Formula {
        parse_formula(sig, t).unwrap()
    }

    #[test]
    fn k_unary() {
        let sig = sig();
        let b = binding([("PHI", f(&sig, "p")), ("CHI", f(&sig, "q"))]);
        let k = k_instance(&sig, "f", 1, &b).unwrap();
        assert_eq!(k, f(&sig, "[f](p -> q) -> [f](p) -> [f](q)"));
        assert!(k_instance(&sig, "f", 2, &b).is_err());
    }

    #[test]
    fn dual_binary() {
        let sig = sig();
        let b = binding([("PSI1", f(&sig, "p")), ("PSI2", f(&sig, "q"))]);
        let d = dual_instance(&sig, "g", &b).unwrap();
        assert_eq!(d, f(&sig, "g(p, q) <-> ![g](!p, !q)"));
        assert!(dual_instance(&sig, "1", &Binding::new()).is_err());
    }

    #[test]
    fn guards() {
        let sig = sig();
        let g = |kind, args: &[&str]| Guard {
            kind,
            args: args.iter().map(|a| Arc::from(*a)).collect(),
        };
        let b = binding([("N", f(&sig, "3")), ("N1", f(&sig, "1")), ("N2", f(&sig, "2"))]);
        check_guard(&sig, &g(GuardKind::IntAdd, &["N", "N1", "N2"]), &b).unwrap();
        let bad = binding([("N", f(&sig, "4")), ("N1", f(&sig, "1")), ("N2", f(&sig, "2"))]);
        assert!(matches!(
            check_guard(&sig, &g(GuardKind::IntAdd, &["N", "N1", "N2"]), &bad),
            Err(Error::Guard { .. })
        ));
        let t = binding([("T", f(&sig, "true")), ("N1", f(&sig, "1")), ("N2", f(&sig, "2"))]);
        check_guard(&sig, &g(GuardKind::LeqTruth, &["T", "N1", "N2"]), &t).unwrap();
        let t = binding([("T", f(&sig, "true")), ("N1", f(&sig, "2")), ("N2", f(&sig, "1"))]);
        assert!(check_guard(&sig, &g(GuardKind::LeqTruth, &["T", "N1", "N2"]), &t).is_err());
        let d = binding([("X", f(&sig, "true")), ("Y", f(&sig, "true"))]);
        assert!(check_guard(&sig, &g(GuardKind::Distinct, &["X", "Y"]), &d).is_err());
        let d = binding([("X", f(&sig, "true")), ("Y", f(&sig, "b"))]);
        assert!(check_guard(&sig, &g(GuardKind::Distinct, &["X", "Y"]), &d).is_err());
        let d = binding([("X", f(&sig, "bot@s"))]);
        check_guard(&sig, &g(GuardKind::IsBot, &["X"]), &d).unwrap();
        assert!(check_guard(&sig, &g(GuardKind::Nat, &["X"]), &d).is_err());
    }

    #[test]
    fn max_round_trip() {
        let sig = sig();
        let text = "basis standard\n\
            scheme Plus meta N : Nat meta N1 : Nat meta N2 : Nat guard intadd(N, N1, N2) ::= N -> N1 | N2\n\
            scheme T meta P : s ::= P -> P\n";
        let set = parse_axioms(&sig, text).unwrap();
        assert_eq!(set.schemes().len(), 2);
        let again = parse_axioms(&sig, &set.to_max(&sig)).unwrap();
        assert_eq!(again, set);
        let plus = set.get("Plus").unwrap();
        let ok = binding([("N", f(&sig, "3")), ("N1", f(&sig, "1")), ("N2", f(&sig, "2"))]);
        assert_eq!(plus.instantiate(&sig, &ok).unwrap(), f(&sig, "3 -> 1 | 2"));
        let bad = binding([("N", f(&sig, "4")), ("N1", f(&sig, "1")), ("N2", f(&sig, "2"))]);
        assert!(plus.instantiate(&sig, &bad).is_err());
        let wrong_sort = binding([("P", f(&sig, "n"))]);
        assert!(set.get("T").unwrap().instantiate(&sig, &wrong_sort).is_err());
        assert!(parse_axioms(&sig, "scheme X meta P : s guard nope(P) ::= P").is_err());
        assert!(parse_axioms(&sig, "scheme X meta P : s ::= P\nscheme X meta P : s ::= P").is_err());
    }

    #[test]
    fn norm_and_add() {
        let sig = sig();
        let b = binding([("PSI1", f(&sig, "bot@s")), ("PSI2", f(&sig, "q"))]);
        let n = norm_instance(&sig, "g", 1, &b).unwrap();
        assert_eq!(n, f(&sig, "g(bot@s, q) <-> bot@s"));
        assert!(norm_instance(&sig, "g", 2, &b).is_err());
        let b = binding([("PSI2", f(&sig, "q")), ("PHI", f(&sig, "p")), ("CHI", f(&sig, "q"))]);
        let a = add_instance(&sig, "g", 1, &b).unwrap();
        assert_eq!(a, f(&sig, "g(p | q, q) <-> g(p, q) | g(q, q)"));
    }
}
