use rand::Rng;

use super::bao::{check_bao, mixed_radix, Bao, BaoVerdict, Elem};
use super::complex::complex_algebra;
use crate::error::{Error, Result};
use crate::semantics::{Frame, World};
use crate::syntax::SortId;

/// An ultrafilter of a finite boolean algebra. In the atom-set representation
/// every ultrafilter is principal, generated by a single atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ultrafilter {
    pub sort: SortId,
    pub atom: usize,
}

impl Ultrafilter {
    pub fn contains(&self, a: Elem) -> bool {
        a >> self.atom & 1 == 1
    }
}

/// The ultrafilters of sort `s`, one per atom, in atom order.
pub fn ultrafilters(bao: &Bao, s: SortId) -> Vec<Ultrafilter> {
    (0..bao.num_atoms(s)).map(|atom| Ultrafilter { sort: s, atom }).collect()
}

/// The ultrafilter frame: worlds of sort `s` are the ultrafilters of `A_s` (world
/// `i` is the ultrafilter of atom `i`) and `Q_σ w w1 … wn` iff
/// `f_σ(a1, …, an) ∈ w` for all `ai ∈ wi`, tested on the generating atoms.
pub fn ultrafilter_frame(bao: &Bao) -> Result<Frame> {
    let sig = bao.signature().clone();
    let names = sig
        .sorts()
        .map(|s| (0..bao.num_atoms(s)).map(|a| format!("uf_{}", bao.atom_name(s, a))).collect())
        .collect();
    let mut frame = Frame::with_names(sig.clone(), names)?;
    for op in sig.ops() {
        let d = sig.op_decl(op);
        let radices: Vec<usize> = d.arg_sorts.iter().map(|s| bao.num_atoms(*s)).collect();
        for t in mixed_radix(&radices) {
            let args: Vec<Elem> = t.iter().map(|a| 1 << a).collect();
            let value = bao.apply(op, &args);
            for w in 0..bao.num_atoms(d.result_sort) {
                if value >> w & 1 == 1 {
                    let mut tuple = vec![w as World];
                    tuple.extend(t.iter().map(|a| *a as World));
                    frame.add_tuple(op, &tuple)?;
                }
            }
        }
    }
    Ok(frame)
}

/// Which part of the embedding check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JtCheck {
    Injective,
    Join,
    Complement,
    Bottom,
    /// Equation (H): `r(f_σ(a1, …, an)) = m_{Q_σ}(r(a1), …, r(an))`.
    Homomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JtVerdict {
    Ok,
    Violated {
        check: JtCheck,
        /// Sort name, or operation name for (H).
        at: String,
        witness: Vec<Elem>,
    },
}

/// Result of [`jt_embedding`].
#[derive(Debug, Clone)]
pub struct JtReport {
    /// `maps[s][a] = r_s(a)`, as a set of ultrafilter-frame worlds.
    pub maps: Vec<Vec<Elem>>,
    pub frame: Frame,
    pub verdict: JtVerdict,
}

/// `r_s(a) = {w | a ∈ w}`.
pub fn embed(bao: &Bao, s: SortId, a: Elem) -> Elem {
    ultrafilters(bao, s)
        .iter()
        .enumerate()
        .filter(|(_, u)| u.contains(a))
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Builds the Jónsson–Tarski map into the complex algebra of the ultrafilter frame
/// and verifies that it is an injective boolean homomorphism satisfying (H) on all
/// argument tuples. Refuses to run on algebras failing [`check_bao`].
pub fn jt_embedding<R: Rng + ?Sized>(bao: &Bao, rng: &mut R) -> Result<JtReport> {
    if let BaoVerdict::Violated { law, at, .. } = check_bao(bao, rng) {
        return Err(Error::Algebra(format!(
            "not a boolean algebra with operators: {law} fails at `{at}`"
        )));
    }
    let sig = bao.signature().clone();
    let frame = ultrafilter_frame(bao)?;
    let target = complex_algebra(&frame)?;
    let maps: Vec<Vec<Elem>> = sig
        .sorts()
        .map(|s| bao.elems(s).map(|a| embed(bao, s, a)).collect())
        .collect();
    let verdict = verify(bao, &target, &maps);
    Ok(JtReport { maps, frame, verdict })
}

fn verify(bao: &Bao, target: &Bao, maps: &[Vec<Elem>]) -> JtVerdict {
    let sig = bao.signature();
    for s in sig.sorts() {
        let r = &maps[s.index()];
        let name = sig.sort_name(s).to_string();
        let fail = |check, witness| JtVerdict::Violated {
            check,
            at: name.clone(),
            witness,
        };
        if r[0] != 0 {
            return fail(JtCheck::Bottom, vec![0]);
        }
        let mut seen = vec![None; target.num_elems(s)];
        for a in bao.elems(s) {
            let img = r[a as usize];
            if let Some(b) = seen[img as usize] {
                return fail(JtCheck::Injective, vec![b, a]);
            }
            seen[img as usize] = Some(a);
            if r[bao.complement(s, a) as usize] != target.complement(s, img) {
                return fail(JtCheck::Complement, vec![a]);
            }
            for b in bao.elems(s) {
                if r[(a | b) as usize] != img | r[b as usize] {
                    return fail(JtCheck::Join, vec![a, b]);
                }
            }
        }
    }
    for op in sig.ops() {
        let d = sig.op_decl(op);
        for t in bao.arg_tuples(op) {
            let lhs = maps[d.result_sort.index()][bao.apply(op, &t) as usize];
            let images: Vec<Elem> = t
                .iter()
                .zip(&d.arg_sorts)
                .map(|(a, s)| maps[s.index()][*a as usize])
                .collect();
            if lhs != target.apply(op, &images) {
                return JtVerdict::Violated {
                    check: JtCheck::Homomorphism,
                    at: d.name.to_string(),
                    witness: t,
                };
            }
        }
    }
    JtVerdict::Ok
}
