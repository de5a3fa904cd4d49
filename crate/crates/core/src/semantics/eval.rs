use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::model::{Model, World};
use crate::error::{Error, Result};
use crate::syntax::{Formula, SortId};

/// The truth set `{w ∈ W_s | M, w ⊨ φ}` where `s` is the sort of `φ`.
pub fn truth_set(model: &Model, phi: &Formula) -> Result<FixedBitSet> {
    model.signature().sort_of(phi)?;
    let mut memo = HashMap::new();
    Ok(eval(model, phi, &mut memo))
}

// Shared subtrees (the same `Arc` reached twice) are evaluated once.
fn eval(model: &Model, phi: &Formula, memo: &mut HashMap<*const Formula, FixedBitSet>) -> FixedBitSet {
    let key = phi as *const Formula;
    if let Some(set) = memo.get(&key) {
        return set.clone();
    }
    let sig = model.signature();
    let frame = &model.frame;
    let set = match phi {
        Formula::Var(v) => model
            .valuation(v)
            .expect("sort-checked formulas only mention declared variables"),
        Formula::Not(a) => {
            let mut s = eval(model, a, memo);
            s.toggle_range(..);
            s
        }
        Formula::Or(a, b) => {
            let mut s = eval(model, a, memo);
            s.union_with(&eval(model, b, memo));
            s
        }
        Formula::App(op, args) => {
            let op = sig.op(op).expect("sort-checked formulas only mention declared operations");
            let decl = sig.op_decl(op);
            let arg_sets: Vec<FixedBitSet> = args.iter().map(|a| eval(model, a, memo)).collect();
            let n = frame.num_worlds(decl.result_sort);
            let mut s = FixedBitSet::with_capacity(n);
            for w in 0..n {
                let hit = frame.successors(op, w as World).iter().any(|tuple| {
                    tuple
                        .iter()
                        .zip(&arg_sets)
                        .all(|(wi, set)| set.contains(*wi as usize))
                });
                s.set(w, hit);
            }
            s
        }
    };
    memo.insert(key, set.clone());
    set
}

/// `M, w ⊨ φ` (Kripke satisfaction; applications are existential over `R_σ`).
pub fn satisfies(model: &Model, world: World, phi: &Formula) -> Result<bool> {
    let s = model.signature().sort_of(phi)?;
    check_world(model, s, world)?;
    Ok(truth_set(model, phi)?.contains(world as usize))
}

fn check_world(model: &Model, s: SortId, world: World) -> Result<()> {
    if world as usize >= model.frame.num_worlds(s) {
        return Err(Error::Model(format!(
            "world {world} is not a world of sort `{}`",
            model.signature().sort_name(s)
        )));
    }
    Ok(())
}

/// First world of `φ`'s sort where `φ` fails, if any.
pub fn failing_world(model: &Model, phi: &Formula) -> Result<Option<World>> {
    let set = truth_set(model, phi)?;
    let s = model.signature().sort_of(phi)?;
    Ok((0..model.frame.num_worlds(s)).find(|w| !set.contains(*w)).map(|w| w as World))
}

/// `M ⊨ φ`: `φ` holds at every world of its sort.
pub fn globally_true(model: &Model, phi: &Formula) -> Result<bool> {
    Ok(failing_world(model, phi)?.is_none())
}

/// `M ⊨ Γ` for a sorted set of formulas.
pub fn global_model_of(model: &Model, gamma: &[Formula]) -> Result<bool> {
    for g in gamma {
        if !globally_true(model, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a consequence check, with the first counterexample found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Consequence {
    pub holds: bool,
    /// `(model index, world)` where all hypotheses hold but the conclusion fails.
    pub counterexample: Option<(usize, World)>,
}

/// Local semantic consequence `Φ_s ⊨^loc φ` over an explicit list of models.
pub fn local_consequence(models: &[Model], hyps: &[Formula], phi: &Formula) -> Result<Consequence> {
    for (i, m) in models.iter().enumerate() {
        let sig = m.signature();
        let s = sig.sort_of(phi)?;
        let mut ok = truth_set(m, phi)?;
        let mut all = FixedBitSet::with_capacity(m.frame.num_worlds(s));
        all.insert_range(..);
        for h in hyps {
            let hs = sig.sort_of(h)?;
            if hs != s {
                return Err(Error::Sort(format!(
                    "hypothesis of sort `{}` for a conclusion of sort `{}`",
                    sig.sort_name(hs),
                    sig.sort_name(s)
                )));
            }
            all.intersect_with(&truth_set(m, h)?);
        }
        ok.toggle_range(..);
        ok.intersect_with(&all);
        if let Some(w) = ok.ones().next() {
            return Ok(Consequence {
                holds: false,
                counterexample: Some((i, w as World)),
            });
        }
    }
    Ok(Consequence {
        holds: true,
        counterexample: None,
    })
}
