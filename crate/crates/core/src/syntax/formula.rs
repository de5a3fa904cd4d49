use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::signature::{OpId, Signature, SortId, Sym};
use crate::error::{Error, Result};

/// A formula over the kernel connectives: variables, negation, disjunction and
/// application of an operation symbol.
///
/// Everything else (`∧`, `→`, `↔`, `⊥_s`, `⊤_s`, duals `σ□`) is a derived form
/// built from these four constructors, so equality is structural on the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Sym),
    Not(Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    App(Sym, Arc<[Formula]>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn app(op: &str, args: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::App(Arc::from(op), args.into_iter().collect())
    }

    /// A nullary application `σ`.
    pub fn constant(op: &str) -> Formula {
        Formula::App(Arc::from(op), Arc::from(Vec::new()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Arc::new(self))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Arc::new(self), Arc::new(other))
    }

    /// `φ ∧ ψ := ¬(¬φ ∨ ¬ψ)`
    pub fn and(self, other: Formula) -> Formula {
        self.not().or(other.not()).not()
    }

    /// `φ → ψ := ¬φ ∨ ψ`
    pub fn implies(self, other: Formula) -> Formula {
        self.not().or(other)
    }

    /// `φ ↔ ψ := (φ → ψ) ∧ (ψ → φ)`
    pub fn iff(self, other: Formula) -> Formula {
        let fwd = self.clone().implies(other.clone());
        let bwd = other.implies(self);
        fwd.and(bwd)
    }

    /// Dual application without signature checks: `¬σ(¬φ1, …, ¬φn)`.
    pub fn dual(op: &str, args: impl IntoIterator<Item = Formula>) -> Formula {
        Formula::app(op, args.into_iter().map(Formula::not)).not()
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn conj(items: &[Formula]) -> Option<Formula> {
        let (first, rest) = items.split_first()?;
        Some(
            rest.iter()
                .fold(first.clone(), |acc, f| acc.and(f.clone())),
        )
    }

    /// `(γ1 ∧ … ∧ γn) → φ`, or `φ` itself when the list is empty.
    pub fn guarded(conjuncts: &[Formula], conclusion: Formula) -> Formula {
        match Formula::conj(conjuncts) {
            Some(c) => c.implies(conclusion),
            None => conclusion,
        }
    }

    /// Splits `¬φ ∨ ψ` into `(φ, ψ)`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Or(l, r) => match &**l {
                Formula::Not(a) => Some((a, r)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Not(a) => Some(a),
            _ => None,
        }
    }

    /// Splits `¬(¬φ ∨ ¬ψ)` into `(φ, ψ)`.
    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        let inner = self.as_not()?;
        match inner {
            Formula::Or(l, r) => Some((l.as_not()?, r.as_not()?)),
            _ => None,
        }
    }

    /// Splits `(φ → ψ) ∧ (ψ → φ)` into `(φ, ψ)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        let (fwd, bwd) = self.as_and()?;
        let (a, b) = fwd.as_implication()?;
        let (b2, a2) = bwd.as_implication()?;
        (a == a2 && b == b2).then_some((a, b))
    }

    /// Matches `¬σ(¬φ1, …, ¬φn)` with `n ≥ 1`.
    pub fn as_dual(&self) -> Option<(&Sym, Vec<&Formula>)> {
        match self.as_not()? {
            Formula::App(op, args) if !args.is_empty() => {
                let inner = args
                    .iter()
                    .map(|a| a.as_not())
                    .collect::<Option<Vec<_>>>()?;
                Some((op, inner))
            }
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::App(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::App(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Variables occurring in the formula.
    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Not(a) => a.collect_vars(out),
            Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Simultaneous replacement of variables, without sort checking.
    pub fn replace_vars(&self, theta: &BTreeMap<Sym, Formula>) -> Formula {
        match self {
            Formula::Var(v) => theta.get(v).cloned().unwrap_or_else(|| self.clone()),
            Formula::Not(a) => a.replace_vars(theta).not(),
            Formula::Or(a, b) => a.replace_vars(theta).or(b.replace_vars(theta)),
            Formula::App(op, args) => Formula::App(
                op.clone(),
                args.iter().map(|a| a.replace_vars(theta)).collect(),
            ),
        }
    }
}

impl Signature {
    /// The unique sort `s` with `φ ∈ Form_s`.
    pub fn sort_of(&self, phi: &Formula) -> Result<SortId> {
        match phi {
            Formula::Var(v) => self
                .var_sort(v)
                .ok_or_else(|| Error::UnknownSymbol(v.to_string())),
            Formula::Not(a) => self.sort_of(a),
            Formula::Or(a, b) => {
                let sa = self.sort_of(a)?;
                let sb = self.sort_of(b)?;
                if sa != sb {
                    return Err(Error::Sort(format!(
                        "disjunction of sorts `{}` and `{}`",
                        self.sort_name(sa),
                        self.sort_name(sb)
                    )));
                }
                Ok(sa)
            }
            Formula::App(op, args) => {
                let id = self.op_or_err(op)?;
                let decl = self.op_decl(id);
                if decl.arity() != args.len() {
                    return Err(Error::Sort(format!(
                        "`{op}` expects {} arguments, got {}",
                        decl.arity(),
                        args.len()
                    )));
                }
                for (i, (arg, want)) in args.iter().zip(&decl.arg_sorts).enumerate() {
                    let got = self.sort_of(arg)?;
                    if got != *want {
                        return Err(Error::Sort(format!(
                            "argument {} of `{op}` has sort `{}`, expected `{}`",
                            i + 1,
                            self.sort_name(got),
                            self.sort_name(*want)
                        )));
                    }
                }
                Ok(decl.result_sort)
            }
        }
    }

    fn check_args(&self, op: OpId, args: &[Formula]) -> Result<()> {
        let decl = self.op_decl(op);
        if decl.arity() != args.len() {
            return Err(Error::Sort(format!(
                "`{}` expects {} arguments, got {}",
                decl.name,
                decl.arity(),
                args.len()
            )));
        }
        for (i, (arg, want)) in args.iter().zip(&decl.arg_sorts).enumerate() {
            let got = self.sort_of(arg)?;
            if got != *want {
                return Err(Error::Sort(format!(
                    "argument {} of `{}` has sort `{}`, expected `{}`",
                    i + 1,
                    decl.name,
                    self.sort_name(got),
                    self.sort_name(*want)
                )));
            }
        }
        Ok(())
    }

    /// Sort-checked application `σ(φ1, …, φn)`.
    pub fn mk_app(&self, op: &str, args: Vec<Formula>) -> Result<Formula> {
        let id = self.op_or_err(op)?;
        self.check_args(id, &args)?;
        Ok(Formula::App(self.op_decl(id).name.clone(), args.into()))
    }

    /// `σ□(φ1, …, φn) := ¬σ(¬φ1, …, ¬φn)` for non-nullary `σ`.
    pub fn mk_dual(&self, op: &str, args: Vec<Formula>) -> Result<Formula> {
        let id = self.op_or_err(op)?;
        if self.op_decl(id).arity() == 0 {
            return Err(Error::Sort(format!("nullary operation `{op}` has no dual")));
        }
        self.check_args(id, &args)?;
        Ok(Formula::dual(op, args))
    }

    /// `⊥_s := p ∧ ¬p` for the canonical variable `p` of `s`.
    pub fn mk_bot(&self, s: SortId) -> Formula {
        let p = Formula::Var(self.canonical_var(s).clone());
        p.clone().and(p.not())
    }

    /// `⊤_s := ¬⊥_s`
    pub fn mk_top(&self, s: SortId) -> Formula {
        self.mk_bot(s).not()
    }

    /// Sorted uniform substitution: every variable `p` in the domain of `theta`
    /// is replaced simultaneously by a formula of the same sort.
    pub fn substitute(&self, phi: &Formula, theta: &BTreeMap<Sym, Formula>) -> Result<Formula> {
        for (v, psi) in theta {
            let want = self
                .var_sort(v)
                .ok_or_else(|| Error::UnknownSymbol(v.to_string()))?;
            let got = self.sort_of(psi)?;
            if got != want {
                return Err(Error::Sort(format!(
                    "cannot substitute a formula of sort `{}` for `{v}` of sort `{}`",
                    self.sort_name(got),
                    self.sort_name(want)
                )));
            }
        }
        self.sort_of(phi)?;
        Ok(phi.replace_vars(theta))
    }
}
