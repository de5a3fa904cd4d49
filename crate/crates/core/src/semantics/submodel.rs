use fixedbitset::FixedBitSet;

use super::model::{Frame, Model, World};
use crate::error::{Error, Result};
use crate::syntax::SortId;

/// A generated submodel together with the bookkeeping needed to relate it to the
/// original model.
#[derive(Debug, Clone)]
pub struct Submodel {
    pub model: Model,
    /// `map[s][w]` is the new index of original world `w`, if it was retained.
    pub map: Vec<Vec<Option<World>>>,
    /// Sorts left empty by the closure and padded with one isolated world.
    pub padded: Vec<SortId>,
}

/// The submodel generated by `seed`: the least family of world sets containing the
/// seed and closed under `w ∈ W'_s ∧ R_σ w w1 … wn ⇒ wi ∈ W'_{si}`.
///
/// Relations and valuation are restricted. A sort that stays empty receives a
/// fresh world with no tuples and an empty valuation.
pub fn generated_submodel(model: &Model, seed: &[(SortId, World)]) -> Result<Submodel> {
    let sig = model.signature().clone();
    let frame = &model.frame;
    let mut keep: Vec<FixedBitSet> = sig
        .sorts()
        .map(|s| FixedBitSet::with_capacity(frame.num_worlds(s)))
        .collect();
    let mut work = Vec::new();
    for &(s, w) in seed {
        if s.index() >= sig.num_sorts() || w as usize >= frame.num_worlds(s) {
            return Err(Error::Model(format!("seed world {w} is not in the model")));
        }
        if !keep[s.index()].put(w as usize) {
            work.push((s, w));
        }
    }
    while let Some((s, w)) = work.pop() {
        for op in sig.ops() {
            let decl = sig.op_decl(op);
            if decl.result_sort != s {
                continue;
            }
            for args in frame.successors(op, w) {
                for (wi, si) in args.iter().zip(&decl.arg_sorts) {
                    if !keep[si.index()].put(*wi as usize) {
                        work.push((*si, *wi));
                    }
                }
            }
        }
    }

    let mut map = Vec::with_capacity(sig.num_sorts());
    let mut names = Vec::with_capacity(sig.num_sorts());
    let mut padded = Vec::new();
    for s in sig.sorts() {
        let mut m = vec![None; frame.num_worlds(s)];
        let mut n = Vec::new();
        for w in keep[s.index()].ones() {
            m[w] = Some(n.len() as World);
            n.push(frame.world_name(s, w as World).to_string());
        }
        if n.is_empty() {
            padded.push(s);
            n.push(format!("pad_{}", sig.sort_name(s)));
        }
        map.push(m);
        names.push(n);
    }
    let mut sub = Frame::with_names(sig.clone(), names)?;
    for op in sig.ops() {
        let decl = sig.op_decl(op);
        let sorts: Vec<SortId> = std::iter::once(decl.result_sort)
            .chain(decl.arg_sorts.iter().copied())
            .collect();
        for t in frame.tuples(op) {
            let image: Option<Vec<World>> = t
                .iter()
                .zip(&sorts)
                .map(|(w, s)| map[s.index()][*w as usize])
                .collect();
            if let Some(image) = image {
                sub.add_tuple(op, &image)?;
            }
        }
    }
    let mut out = Model::new(sub);
    for (v, s) in sig.all_vars() {
        let old = model.valuation(v)?;
        let worlds: Vec<World> = old
            .ones()
            .filter_map(|w| map[s.index()][w])
            .collect();
        if !worlds.is_empty() {
            out.set_valuation(v, &worlds)?;
        }
    }
    Ok(Submodel {
        model: out,
        map,
        padded,
    })
}
