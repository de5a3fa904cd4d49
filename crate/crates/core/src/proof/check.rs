use std::fmt;

use super::scheme::{
    add_instance, dual_instance, k_instance, norm_instance, AxiomSet, Basis, Binding,
};
use super::taut::taut_check;
use crate::error::{Error, Result};
use crate::syntax::{print_formula, Formula, Signature, SortId, Sym};

/// How a proof step is justified. Step references are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Instance of a classical tautology.
    Taut,
    /// Instance of a named scheme of `Λ`.
    Axiom { name: Sym, binding: Binding },
    /// `K^i_σ`.
    K { op: Sym, pos: usize, binding: Binding },
    /// `Dual_σ`.
    Dual { op: Sym, binding: Binding },
    /// `Norm^i_σ` (alternative basis).
    Norm { op: Sym, pos: usize, binding: Binding },
    /// `Add^i_σ` (alternative basis).
    Add { op: Sym, pos: usize, binding: Binding },
    /// Member of the global hypotheses.
    Hyp,
    /// Modus ponens from step `minor` (`φ`) and step `major` (`φ → ψ`).
    Mp { minor: usize, major: usize },
    /// `UG^i_σ` applied to step `premise`, with the other arguments given as `sides`.
    Ug { op: Sym, pos: usize, premise: usize, sides: Vec<Formula> },
    /// Monotonicity of `σ` at `pos` (alternative basis) from step `premise` (`φ → φ'`).
    Mono { op: Sym, pos: usize, premise: usize, sides: Vec<Formula> },
}

impl Justification {
    /// Steps this justification cites.
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::Mp { minor, major } => vec![*minor, *major],
            Justification::Ug { premise, .. } | Justification::Mono { premise, .. } => vec![*premise],
            _ => Vec::new(),
        }
    }

    /// Rewrites cited step numbers.
    pub fn renumber(&mut self, f: impl Fn(usize) -> usize) {
        match self {
            Justification::Mp { minor, major } => {
                *minor = f(*minor);
                *major = f(*major);
            }
            Justification::Ug { premise, .. } | Justification::Mono { premise, .. } => *premise = f(*premise),
            _ => {}
        }
    }

    /// True for axiom-scheme instances (of `Λ` or the built-in modal schemes).
    pub fn is_instance(&self) -> bool {
        matches!(
            self,
            Justification::Axiom { .. }
                | Justification::K { .. }
                | Justification::Dual { .. }
                | Justification::Norm { .. }
                | Justification::Add { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    /// `Φ_s ⊢_s φ`: no hypothesis steps; the last step is `(γ1 ∧ … ∧ γn) → φ` for the
    /// witnesses `γj = hyps[witnesses[j] - 1]`.
    Local {
        sort: SortId,
        hyps: Vec<Formula>,
        witnesses: Vec<usize>,
    },
    /// `Γ ⊢ φ`: hypothesis steps must be members of `hyps`.
    Global { hyps: Vec<Formula> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub mode: Mode,
    pub steps: Vec<ProofStep>,
    /// If present, the conclusion must be exactly this formula.
    pub goal: Option<Formula>,
}

impl Proof {
    pub fn global(hyps: Vec<Formula>, steps: Vec<ProofStep>) -> Proof {
        Proof {
            mode: Mode::Global { hyps },
            steps,
            goal: None,
        }
    }

    pub fn last_formula(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// Witness formulas of a local proof (empty for global proofs).
    pub fn witness_formulas(&self) -> Vec<Formula> {
        match &self.mode {
            Mode::Local { hyps, witnesses, .. } => witnesses
                .iter()
                .filter_map(|w| hyps.get(w.wrapping_sub(1)).cloned())
                .collect(),
            Mode::Global { .. } => Vec::new(),
        }
    }

    /// Formulas of all steps justified as scheme instances.
    pub fn cited_instances(&self) -> Vec<Formula> {
        self.steps
            .iter()
            .filter(|s| s.just.is_instance())
            .map(|s| s.formula.clone())
            .collect()
    }

    /// Hypotheses actually used by `hyp` steps.
    pub fn used_hyps(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        for s in &self.steps {
            if s.just == Justification::Hyp && !out.contains(&s.formula) {
                out.push(s.formula.clone());
            }
        }
        out
    }
}

/// Result of checking a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accepted { conclusion: Formula },
    /// `step` is the 1-based failing step, or `None` for problems with the proof as
    /// a whole (mode, witnesses, goal).
    Rejected { step: Option<usize>, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        match self {
            Verdict::Accepted { conclusion } => Some(conclusion),
            Verdict::Rejected { .. } => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accepted { .. } => write!(f, "accepted"),
            Verdict::Rejected { step: Some(i), reason } => write!(f, "rejected at step {i}: {reason}"),
            Verdict::Rejected { step: None, reason } => write!(f, "rejected: {reason}"),
        }
    }
}

/// Substitutes `f` at 1-based position `pos` into the side list.
pub fn insert_at(sides: &[Formula], pos: usize, f: Formula) -> Vec<Formula> {
    let mut args = sides.to_vec();
    args.insert(pos - 1, f);
    args
}

fn check_sides(sig: &Signature, op: &str, pos: usize, sides: &[Formula], at: &Formula) -> Result<Vec<Formula>> {
    let decl = sig.decl(op)?;
    if decl.arity() == 0 {
        return Err(Error::Proof(format!("`{op}` is nullary")));
    }
    if pos == 0 || pos > decl.arity() {
        return Err(Error::Proof(format!("position {pos} out of range for `{op}`")));
    }
    if sides.len() + 1 != decl.arity() {
        return Err(Error::Proof(format!(
            "`{op}` needs {} side formulas, got {}",
            decl.arity() - 1,
            sides.len()
        )));
    }
    let args = insert_at(sides, pos, at.clone());
    sig.mk_app(op, args.clone())?;
    Ok(args)
}

/// The formula a step's justification produces, given the formulas of earlier steps
/// (`None` for justifications that are checked rather than computed).
fn check_step(
    sig: &Signature,
    axioms: &AxiomSet,
    mode: &Mode,
    earlier: &[ProofStep],
    step: &ProofStep,
) -> Result<()> {
    let cite = |j: usize| -> Result<&Formula> {
        if j == 0 || j > earlier.len() {
            return Err(Error::Proof(format!("cites step {j}, which is not an earlier step")));
        }
        Ok(&earlier[j - 1].formula)
    };
    let expect = |want: Formula| -> Result<()> {
        if want == step.formula {
            Ok(())
        } else {
            Err(Error::Proof(format!(
                "justification yields `{}`",
                print_formula(sig, &want)
            )))
        }
    };
    let standard_only = |what: &str| -> Result<()> {
        if axioms.basis != Basis::Standard {
            return Err(Error::Proof(format!("{what} is not available in the alternative basis")));
        }
        Ok(())
    };
    let alternative_only = |what: &str| -> Result<()> {
        if axioms.basis != Basis::Alternative {
            return Err(Error::Proof(format!("{what} is only available in the alternative basis")));
        }
        Ok(())
    };
    match &step.just {
        Justification::Taut => {
            if !taut_check(sig, &step.formula)? {
                return Err(Error::Proof("not a tautology".into()));
            }
            Ok(())
        }
        Justification::Axiom { name, binding } => {
            let scheme = axioms
                .get(name)
                .ok_or_else(|| Error::Proof(format!("unknown scheme `{name}`")))?;
            expect(scheme.instantiate(sig, binding)?)
        }
        Justification::K { op, pos, binding } => {
            standard_only("K")?;
            expect(k_instance(sig, op, *pos, binding)?)
        }
        Justification::Dual { op, binding } => {
            standard_only("Dual")?;
            expect(dual_instance(sig, op, binding)?)
        }
        Justification::Norm { op, pos, binding } => {
            alternative_only("Norm")?;
            expect(norm_instance(sig, op, *pos, binding)?)
        }
        Justification::Add { op, pos, binding } => {
            alternative_only("Add")?;
            expect(add_instance(sig, op, *pos, binding)?)
        }
        Justification::Hyp => match mode {
            Mode::Local { .. } => Err(Error::Proof("hypothesis steps are not allowed in local mode".into())),
            Mode::Global { hyps } => {
                if hyps.contains(&step.formula) {
                    Ok(())
                } else {
                    Err(Error::Proof("not a member of the hypotheses".into()))
                }
            }
        },
        Justification::Mp { minor, major } => {
            let a = cite(*minor)?;
            let imp = cite(*major)?;
            match imp.as_implication() {
                Some((ante, cons)) if ante == a => expect(cons.clone()),
                Some(_) => Err(Error::Proof(format!(
                    "the antecedent of step {major} is not step {minor}"
                ))),
                None => Err(Error::Proof(format!("step {major} is not an implication"))),
            }
        }
        Justification::Ug { op, pos, premise, sides } => {
            standard_only("UG")?;
            let phi = cite(*premise)?;
            let args = check_sides(sig, op, *pos, sides, phi)?;
            expect(Formula::dual(op, args))
        }
        Justification::Mono { op, pos, premise, sides } => {
            alternative_only("the monotonicity rule")?;
            let imp = cite(*premise)?;
            let (a, b) = imp
                .as_implication()
                .ok_or_else(|| Error::Proof(format!("step {premise} is not an implication")))?;
            let lhs = check_sides(sig, op, *pos, sides, a)?;
            let rhs = check_sides(sig, op, *pos, sides, b)?;
            expect(Formula::app(op, lhs).implies(Formula::app(op, rhs)))
        }
    }
}

/// Checks a proof in `KΛ` in its declared mode.
pub fn check_proof(sig: &Signature, axioms: &AxiomSet, proof: &Proof) -> Verdict {
    let reject = |step: Option<usize>, e: Error| Verdict::Rejected {
        step,
        reason: match e {
            Error::Proof(m) => m,
            other => other.to_string(),
        },
    };
    if let Mode::Local { sort, hyps, witnesses } = &proof.mode {
        for h in hyps {
            match sig.sort_of(h) {
                Ok(s) if s == *sort => {}
                Ok(_) => return reject(None, Error::Proof("a hypothesis has the wrong sort".into())),
                Err(e) => return reject(None, e),
            }
        }
        if let Some(w) = witnesses.iter().find(|w| **w == 0 || **w > hyps.len()) {
            return reject(None, Error::Proof(format!("witness {w} is not a hypothesis index")));
        }
    }
    if let Mode::Global { hyps } = &proof.mode {
        for h in hyps {
            if let Err(e) = sig.sort_of(h) {
                return reject(None, e);
            }
        }
    }
    if proof.steps.is_empty() {
        return reject(None, Error::Proof("the proof has no steps".into()));
    }
    for (i, step) in proof.steps.iter().enumerate() {
        if let Err(e) = sig.sort_of(&step.formula) {
            return reject(Some(i + 1), e);
        }
        if let Err(e) = check_step(sig, axioms, &proof.mode, &proof.steps[..i], step) {
            return reject(Some(i + 1), e);
        }
    }
    let last = proof.steps.last().expect("nonempty").formula.clone();
    let conclusion = match &proof.mode {
        Mode::Global { .. } => last,
        Mode::Local { sort, .. } => {
            if sig.sort_of(&last).ok() != Some(*sort) {
                return reject(None, Error::Proof("the last step has the wrong sort".into()));
            }
            let ws = proof.witness_formulas();
            match Formula::conj(&ws) {
                None => last,
                Some(c) => match last.as_implication() {
                    Some((ante, cons)) if *ante == c => cons.clone(),
                    _ => {
                        return reject(
                            None,
                            Error::Proof("the last step is not the witness conjunction implying the conclusion".into()),
                        )
                    }
                },
            }
        }
    };
    if let Some(goal) = &proof.goal {
        if *goal != conclusion {
            return reject(
                None,
                Error::Proof(format!(
                    "the conclusion `{}` differs from the goal",
                    print_formula(sig, &conclusion)
                )),
            );
        }
    }
    Verdict::Accepted { conclusion }
}
