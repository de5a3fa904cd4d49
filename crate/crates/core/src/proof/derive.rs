//! Derived rules and theorems of `K` (standard basis): monotonicity, distribution
//! of `σ□` over `∧` and of `σ` over `∨`, and congruence.

use super::builder::ProofBuilder;
use super::check::{insert_at, Mode, Proof, Verdict};
use super::scheme::{k_binding, side_binding, AxiomSet, Basis};
use super::check_proof;
use crate::error::{Error, Result};
use crate::syntax::{Formula, Signature};

fn implication(b: &ProofBuilder<'_>, i: usize) -> Result<(Formula, Formula)> {
    b.formula(i)
        .as_implication()
        .map(|(x, y)| (x.clone(), y.clone()))
        .ok_or_else(|| Error::Proof(format!("step {i} is not an implication")))
}

fn equivalence(b: &ProofBuilder<'_>, i: usize) -> Result<(Formula, Formula)> {
    b.formula(i)
        .as_iff()
        .map(|(x, y)| (x.clone(), y.clone()))
        .ok_or_else(|| Error::Proof(format!("step {i} is not an equivalence")))
}

fn boxed(op: &str, sides: &[Formula], pos: usize, f: Formula) -> Formula {
    Formula::dual(op, insert_at(sides, pos, f))
}

fn app(op: &str, sides: &[Formula], pos: usize, f: Formula) -> Formula {
    Formula::app(op, insert_at(sides, pos, f))
}

/// From step `imp` proving `φ → φ'`: `σ□(…, φ, …) → σ□(…, φ', …)` (UG, K, MP).
pub fn box_mono(b: &mut ProofBuilder<'_>, op: &str, pos: usize, sides: &[Formula], imp: usize) -> Result<usize> {
    let (phi, phi2) = implication(b, imp)?;
    let ug = b.ug(op, pos, imp, sides)?;
    let k = b.k(op, pos, k_binding(sides, pos, phi, phi2))?;
    b.mp(ug, k)
}

/// From step `imp` proving `φ → φ'`: `σ(…, φ, …) → σ(…, φ', …)`.
///
/// Contraposition and box-monotonicity over the negated arguments, then `Dual_σ` on
/// both sides.
pub fn dia_mono(b: &mut ProofBuilder<'_>, op: &str, pos: usize, sides: &[Formula], imp: usize) -> Result<usize> {
    let (phi, phi2) = implication(b, imp)?;
    let contra = b.mp_chain(&[imp], phi2.clone().not().implies(phi.clone().not()))?;
    let neg_sides: Vec<Formula> = sides.iter().cloned().map(Formula::not).collect();
    let bm = box_mono(b, op, pos, &neg_sides, contra)?;
    let d1 = b.dual(op, side_binding(&insert_at(sides, pos, phi.clone()), 0))?;
    let d2 = b.dual(op, side_binding(&insert_at(sides, pos, phi2.clone()), 0))?;
    b.mp_chain(&[d1, d2, bm], app(op, sides, pos, phi).implies(app(op, sides, pos, phi2)))
}

/// `σ□(…, φ, …) ∧ σ□(…, φ', …) → σ□(…, φ∧φ', …)`.
pub fn box_conj_intro(
    b: &mut ProofBuilder<'_>,
    op: &str,
    pos: usize,
    sides: &[Formula],
    phi: &Formula,
    phi2: &Formula,
) -> Result<usize> {
    let both = phi.clone().and(phi2.clone());
    let t = b.taut(phi.clone().implies(phi2.clone().implies(both.clone())))?;
    let bm = box_mono(b, op, pos, sides, t)?;
    let k = b.k(op, pos, k_binding(sides, pos, phi2.clone(), both.clone()))?;
    let goal = boxed(op, sides, pos, phi.clone())
        .and(boxed(op, sides, pos, phi2.clone()))
        .implies(boxed(op, sides, pos, both));
    b.mp_chain(&[bm, k], goal)
}

/// `σ□(…, φ∧φ', …) ↔ σ□(…, φ, …) ∧ σ□(…, φ', …)`.
pub fn box_conj(
    b: &mut ProofBuilder<'_>,
    op: &str,
    pos: usize,
    sides: &[Formula],
    phi: &Formula,
    phi2: &Formula,
) -> Result<usize> {
    let both = phi.clone().and(phi2.clone());
    let left = b.taut(both.clone().implies(phi.clone()))?;
    let right = b.taut(both.clone().implies(phi2.clone()))?;
    let l = box_mono(b, op, pos, sides, left)?;
    let r = box_mono(b, op, pos, sides, right)?;
    let back = box_conj_intro(b, op, pos, sides, phi, phi2)?;
    let goal = boxed(op, sides, pos, both)
        .iff(boxed(op, sides, pos, phi.clone()).and(boxed(op, sides, pos, phi2.clone())));
    b.mp_chain(&[l, r, back], goal)
}

/// `σ(…, φ∨φ', …) ↔ σ(…, φ, …) ∨ σ(…, φ', …)`.
pub fn dia_disj(
    b: &mut ProofBuilder<'_>,
    op: &str,
    pos: usize,
    sides: &[Formula],
    phi: &Formula,
    phi2: &Formula,
) -> Result<usize> {
    let neg_sides: Vec<Formula> = sides.iter().cloned().map(Formula::not).collect();
    let (n1, n2) = (phi.clone().not(), phi2.clone().not());
    let either = phi.clone().or(phi2.clone());
    // σ□(¬ψ, ¬φ∧¬φ') ↔ σ□(¬ψ, ¬φ) ∧ σ□(¬ψ, ¬φ')
    let bc = box_conj(b, op, pos, &neg_sides, &n1, &n2)?;
    // ¬(φ∨φ') and ¬φ∧¬φ' are interchangeable under σ□
    let conj = n1.clone().and(n2.clone());
    let to = b.taut(either.clone().not().implies(conj.clone()))?;
    let from = b.taut(conj.implies(either.clone().not()))?;
    let m1 = box_mono(b, op, pos, &neg_sides, to)?;
    let m2 = box_mono(b, op, pos, &neg_sides, from)?;
    let d0 = b.dual(op, side_binding(&insert_at(sides, pos, either.clone()), 0))?;
    let d1 = b.dual(op, side_binding(&insert_at(sides, pos, phi.clone()), 0))?;
    let d2 = b.dual(op, side_binding(&insert_at(sides, pos, phi2.clone()), 0))?;
    let goal = app(op, sides, pos, either)
        .iff(app(op, sides, pos, phi.clone()).or(app(op, sides, pos, phi2.clone())));
    b.mp_chain(&[bc, m1, m2, d0, d1, d2], goal)
}

/// From step `eq` proving `φ ↔ φ'`: `σ(…, φ, …) ↔ σ(…, φ', …)`.
pub fn cong(b: &mut ProofBuilder<'_>, op: &str, pos: usize, sides: &[Formula], eq: usize) -> Result<usize> {
    let (phi, phi2) = equivalence(b, eq)?;
    let fwd = b.mp_chain(&[eq], phi.clone().implies(phi2.clone()))?;
    let bwd = b.mp_chain(&[eq], phi2.clone().implies(phi.clone()))?;
    let m1 = dia_mono(b, op, pos, sides, fwd)?;
    let m2 = dia_mono(b, op, pos, sides, bwd)?;
    b.mp_chain(&[m1, m2], app(op, sides, pos, phi).iff(app(op, sides, pos, phi2)))
}

/// From step `eq` proving `φ ↔ φ'`: `σ□(…, φ, …) ↔ σ□(…, φ', …)`.
pub fn box_cong(b: &mut ProofBuilder<'_>, op: &str, pos: usize, sides: &[Formula], eq: usize) -> Result<usize> {
    let (phi, phi2) = equivalence(b, eq)?;
    let fwd = b.mp_chain(&[eq], phi.clone().implies(phi2.clone()))?;
    let bwd = b.mp_chain(&[eq], phi2.clone().implies(phi.clone()))?;
    let m1 = box_mono(b, op, pos, sides, fwd)?;
    let m2 = box_mono(b, op, pos, sides, bwd)?;
    b.mp_chain(&[m1, m2], boxed(op, sides, pos, phi).iff(boxed(op, sides, pos, phi2)))
}

fn check_position(sig: &Signature, op: &str, pos: usize, sides: &[Formula]) -> Result<()> {
    let decl = sig.decl(op)?;
    if decl.arity() == 0 || pos == 0 || pos > decl.arity() || sides.len() + 1 != decl.arity() {
        return Err(Error::Sort(format!(
            "`{op}` of arity {} cannot take position {pos} with {} side formulas",
            decl.arity(),
            sides.len()
        )));
    }
    for (j, (f, s)) in sides
        .iter()
        .zip(decl.arg_sorts.iter().enumerate().filter(|(k, _)| k + 1 != pos).map(|(_, s)| s))
        .enumerate()
    {
        let got = sig.sort_of(f)?;
        if got != *s {
            return Err(Error::Sort(format!("side formula {} of `{op}` has the wrong sort", j + 1)));
        }
    }
    Ok(())
}

fn theorem_premise(sig: &Signature, sub: &Proof) -> Result<()> {
    let empty = AxiomSet::new(Basis::Standard);
    let closed = match &sub.mode {
        Mode::Global { .. } => sub.used_hyps().is_empty(),
        Mode::Local { witnesses, .. } => witnesses.is_empty(),
    };
    if !closed {
        return Err(Error::Proof("the supplied sub-proof depends on hypotheses".into()));
    }
    match check_proof(sig, &empty, sub) {
        Verdict::Accepted { .. } => Ok(()),
        v => Err(Error::Proof(format!("the supplied sub-proof is invalid: {v}"))),
    }
}

fn finish(b: ProofBuilder<'_>, last: usize) -> Proof {
    b.finish_global(Vec::new(), last)
}

/// Proposition (i): given a proof of `⊢ φ → φ'`, a proof of
/// `σ□(…, φ, …) → σ□(…, φ', …)`.
pub fn derive_mono(sig: &Signature, op: &str, pos: usize, sides: &[Formula], sub: &Proof) -> Result<Proof> {
    check_position(sig, op, pos, sides)?;
    theorem_premise(sig, sub)?;
    let mut b = ProofBuilder::new(sig);
    let imp = b.include(sub)?;
    let last = box_mono(&mut b, op, pos, sides, imp)?;
    Ok(finish(b, last))
}

/// Proposition (ii): `σ□(…, φ∧φ', …) ↔ σ□(…, φ, …) ∧ σ□(…, φ', …)`.
pub fn derive_box_conj(sig: &Signature, op: &str, pos: usize, sides: &[Formula], phi: &Formula, phi2: &Formula) -> Result<Proof> {
    check_position(sig, op, pos, sides)?;
    sig.mk_app(op, insert_at(sides, pos, phi.clone().and(phi2.clone())))?;
    let mut b = ProofBuilder::new(sig);
    let last = box_conj(&mut b, op, pos, sides, phi, phi2)?;
    Ok(finish(b, last))
}

/// Proposition (iii): `σ(…, φ∨φ', …) ↔ σ(…, φ, …) ∨ σ(…, φ', …)`.
pub fn derive_dia_disj(sig: &Signature, op: &str, pos: usize, sides: &[Formula], phi: &Formula, phi2: &Formula) -> Result<Proof> {
    check_position(sig, op, pos, sides)?;
    sig.mk_app(op, insert_at(sides, pos, phi.clone().or(phi2.clone())))?;
    let mut b = ProofBuilder::new(sig);
    let last = dia_disj(&mut b, op, pos, sides, phi, phi2)?;
    Ok(finish(b, last))
}

/// Proposition (iv): given a proof of `⊢ φ ↔ φ'`, a proof of
/// `σ(…, φ, …) ↔ σ(…, φ', …)`.
pub fn derive_cong(sig: &Signature, op: &str, pos: usize, sides: &[Formula], sub: &Proof) -> Result<Proof> {
    check_position(sig, op, pos, sides)?;
    theorem_premise(sig, sub)?;
    let mut b = ProofBuilder::new(sig);
    let eq = b.include(sub)?;
    let last = cong(&mut b, op, pos, sides, eq)?;
    Ok(finish(b, last))
}

/// A one-step proof of a tautology, convenient as a premise for the generators.
pub fn taut_proof(sig: &Signature, f: Formula) -> Result<Proof> {
    let mut b = ProofBuilder::new(sig);
    let i = b.taut(f)?;
    Ok(finish(b, i))
}
