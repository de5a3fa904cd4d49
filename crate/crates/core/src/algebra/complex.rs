use std::collections::BTreeMap;

use super::bao::{Bao, Elem, MAX_ATOMS};
use crate::error::{Error, Result};
use crate::semantics::{Frame, Model};
use crate::syntax::{Formula, OpId, Signature, SortId, Sym};

/// Assignment of algebra elements to variables.
pub type Assignment = BTreeMap<Sym, Elem>;

fn check_frame_size(frame: &Frame) -> Result<()> {
    let sig = frame.signature();
    for s in sig.sorts() {
        if frame.num_worlds(s) > MAX_ATOMS {
            return Err(Error::Algebra(format!(
                "sort `{}` has {} worlds; complex algebras support at most {MAX_ATOMS}",
                sig.sort_name(s),
                frame.num_worlds(s)
            )));
        }
    }
    Ok(())
}

fn world_names(frame: &Frame) -> Vec<Vec<String>> {
    let sig = frame.signature();
    sig.sorts()
        .map(|s| frame.worlds(s).map(|w| frame.world_name(s, w).to_string()).collect())
        .collect()
}

/// The full complex algebra of a frame: atoms are worlds and
/// `m_σ(X1, …, Xn) = {w | R_σ w w1 … wn for some wi ∈ Xi}`.
pub fn complex_algebra(frame: &Frame) -> Result<Bao> {
    check_frame_size(frame)?;
    let sig = frame.signature().clone();
    Bao::from_fn(sig.clone(), world_names(frame), |op, args| {
        let d = sig.op_decl(op);
        frame
            .worlds(d.result_sort)
            .filter(|w| {
                frame
                    .successors(op, *w)
                    .iter()
                    .any(|t| t.iter().zip(args).all(|(wi, x)| x >> wi & 1 == 1))
            })
            .fold(0, |acc, w| acc | 1 << w)
    })
}

/// The dual of `m_σ` read off the frame:
/// `l_σ(X1, …, Xn) = {w | R_σ w w1 … wn implies wi ∈ Xi for some i}`.
pub fn complex_dual(frame: &Frame, op: OpId, args: &[Elem]) -> Elem {
    let d = frame.signature().op_decl(op);
    frame
        .worlds(d.result_sort)
        .filter(|w| {
            frame
                .successors(op, *w)
                .iter()
                .all(|t| t.iter().zip(args).any(|(wi, x)| x >> wi & 1 == 1))
        })
        .fold(0, |acc, w| acc | 1 << w)
}

/// The assignment `e(p) = ρ(p)` induced by a model's valuation.
pub fn model_assignment(model: &Model) -> Result<Assignment> {
    check_frame_size(&model.frame)?;
    let sig = model.signature().clone();
    let mut out = Assignment::new();
    for (v, _) in sig.all_vars() {
        let set = model.valuation(v)?;
        out.insert(v.clone(), set.ones().fold(0, |acc, w| acc | 1 << w));
    }
    Ok(out)
}

/// The homomorphic extension of an assignment to all formulas.
pub fn eval(sig: &Signature, bao: &Bao, e: &Assignment, phi: &Formula) -> Result<Elem> {
    let s = sig.sort_of(phi)?;
    eval_at(sig, bao, e, phi, s)
}

fn eval_at(sig: &Signature, bao: &Bao, e: &Assignment, phi: &Formula, s: SortId) -> Result<Elem> {
    Ok(match phi {
        Formula::Var(p) => {
            let v = *e
                .get(p)
                .ok_or_else(|| Error::Algebra(format!("no assignment for variable `{p}`")))?;
            if v & !bao.top(s) != 0 {
                return Err(Error::Algebra(format!("the value of `{p}` is outside its sort")));
            }
            v
        }
        Formula::Not(a) => bao.complement(s, eval_at(sig, bao, e, a, s)?),
        Formula::Or(a, b) => eval_at(sig, bao, e, a, s)? | eval_at(sig, bao, e, b, s)?,
        Formula::App(op, args) => {
            let id = sig.op_or_err(op)?;
            let d = sig.op_decl(id);
            let vals = args
                .iter()
                .zip(&d.arg_sorts)
                .map(|(a, t)| eval_at(sig, bao, e, a, *t))
                .collect::<Result<Vec<_>>>()?;
            bao.apply(id, &vals)
        }
    })
}
