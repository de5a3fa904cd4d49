use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Signature, SortId};

fn push_unique(out: &mut Vec<Formula>, seen: &mut HashSet<Formula>, f: Formula) -> bool {
    if seen.insert(f.clone()) {
        out.push(f);
        true
    } else {
        false
    }
}

/// All side-argument tuples for `σ` with position `pos` left out, drawn from the pool.
fn side_tuples(sig: &Signature, arg_sorts: &[SortId], pos: usize, pool: &[Formula]) -> Result<Vec<Vec<Formula>>> {
    let mut tuples = vec![Vec::new()];
    for (j, s) in arg_sorts.iter().enumerate() {
        if j + 1 == pos {
            continue;
        }
        let choices: Vec<&Formula> = pool.iter().filter(|f| sig.sort_of(f).ok() == Some(*s)).collect();
        if choices.is_empty() {
            return Err(Error::Proof(format!(
                "the side pool has no formula of sort `{}`",
                sig.sort_name(*s)
            )));
        }
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                choices.iter().map(move |c| {
                    let mut t = t.clone();
                    t.push((*c).clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples)
}

/// `Γ^k` with side formulas drawn from `side_pool`: `Γ^0 = Γ` and `Γ^{k+1}` adds
/// `σ□(ψ1, …, γ, …, ψn)` for every `γ ∈ Γ^k` at every argument position of matching
/// sort. Members are listed in order of discovery.
pub fn gamma_closure(sig: &Signature, gamma: &[Formula], k: usize, side_pool: &[Formula]) -> Result<Vec<Formula>> {
    for f in gamma.iter().chain(side_pool) {
        sig.sort_of(f)?;
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for g in gamma {
        push_unique(&mut out, &mut seen, g.clone());
    }
    let mut frontier = out.clone();
    for _ in 0..k {
        let mut next = Vec::new();
        for g in &frontier {
            let s = sig.sort_of(g)?;
            for op in sig.ops() {
                let d = sig.op_decl(op);
                for (i, t) in d.arg_sorts.iter().enumerate() {
                    if *t != s {
                        continue;
                    }
                    for mut sides in side_tuples(sig, &d.arg_sorts, i + 1, side_pool)? {
                        sides.insert(i, g.clone());
                        let f = Formula::dual(&d.name, sides);
                        if push_unique(&mut out, &mut seen, f.clone()) {
                            next.push(f);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}
