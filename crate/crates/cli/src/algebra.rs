use std::sync::Arc;

use anyhow::{Context, Result};
use msml::algebra::{check_bao, jt_embedding, parse_bao, Bao, BaoVerdict, Elem, JtVerdict, Law};
use msml::semantics::World;
use msml::SortId;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::logic::{load_sig, read};
use crate::output::Out;
use crate::{AlgebraArgs, Status};

fn load(a: &AlgebraArgs) -> Result<Bao> {
    let sig = Arc::new(load_sig(&a.sig)?);
    parse_bao(sig, &read(&a.algebra)?).with_context(|| format!("in `{}`", a.algebra.display()))
}

/// Sorts of an (N)/(A) witness: the argument sorts, then the sort of the extra summand.
fn witness_sorts(bao: &Bao, at: &str, pos: Option<usize>, len: usize) -> Vec<SortId> {
    let sig = bao.signature();
    if let Some(op) = sig.op(at) {
        let d = sig.op_decl(op);
        let mut sorts = d.arg_sorts.clone();
        if let Some(p) = pos {
            sorts.push(d.arg_sorts[p - 1]);
        }
        sorts.truncate(len);
        sorts
    } else {
        let s = sig.sort(at).expect("boolean violations name a sort");
        vec![s; len]
    }
}

fn show_witness(bao: &Bao, sorts: &[SortId], w: &[Elem]) -> Vec<String> {
    w.iter().zip(sorts).map(|(a, s)| bao.show(*s, *a)).collect()
}

pub fn bao_check(out: &Out, a: AlgebraArgs, seed: u64) -> Result<Status> {
    let bao = load(&a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match check_bao(&bao, &mut rng) {
        BaoVerdict::Ok => {
            out.emit("verdict", json!({ "ok": true }), "ok: (N) and (A) hold, boolean laws spot-checked");
            Ok(Status::Ok)
        }
        BaoVerdict::Violated { law, at, pos, witness } => {
            let shown = show_witness(&bao, &witness_sorts(&bao, &at, pos, witness.len()), &witness);
            let law_name = match law {
                Law::Normality => "normality",
                Law::Additivity => "additivity",
                Law::Boolean => "boolean",
            };
            let place = pos.map(|p| format!(" position {p}")).unwrap_or_default();
            out.emit(
                "verdict",
                json!({ "ok": false, "law": law_name, "at": at, "pos": pos, "witness": shown }),
                format!("violated: {law} at `{at}`{place}, witness ({})", shown.join(", ")),
            );
            Ok(Status::Failed)
        }
    }
}

pub fn jt(out: &Out, a: AlgebraArgs, seed: u64) -> Result<Status> {
    let bao = load(&a)?;
    let sig = bao.signature().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = jt_embedding(&bao, &mut rng)?;
    for s in sig.sorts() {
        let sort = &**sig.sort_name(s);
        let ufs: Vec<String> = report
            .frame
            .worlds(s)
            .map(|w| report.frame.world_name(s, w).to_string())
            .collect();
        out.emit(
            "ultrafilters",
            json!({ "sort": sort, "count": ufs.len(), "atoms": bao.num_atoms(s), "worlds": ufs }),
            format!("sort {sort}: {} ultrafilters, {} atoms", ufs.len(), bao.num_atoms(s)),
        );
        for elem in bao.elems(s) {
            let image = report.maps[s.index()][elem as usize];
            let worlds: Vec<String> = (0..report.frame.num_worlds(s))
                .filter(|w| image >> w & 1 == 1)
                .map(|w| report.frame.world_name(s, w as World).to_string())
                .collect();
            let from = bao.show(s, elem);
            out.emit(
                "map",
                json!({ "sort": sort, "elem": from, "image": worlds }),
                format!("  r({from}) = {{{}}}", worlds.join(" ")),
            );
        }
    }
    for op in sig.ops() {
        let d = sig.op_decl(op);
        for t in report.frame.tuples(op) {
            let names: Vec<String> = std::iter::once(d.result_sort)
                .chain(d.arg_sorts.iter().copied())
                .zip(&t)
                .map(|(s, w)| report.frame.world_name(s, *w).to_string())
                .collect();
            out.emit(
                "relation",
                json!({ "op": &*d.name, "tuple": names }),
                format!("Q_{} {}", d.name, names.join(" ")),
            );
        }
    }
    match report.verdict {
        JtVerdict::Ok => {
            out.emit("verdict", json!({ "ok": true }), "ok: injective boolean homomorphism satisfying (H)");
            Ok(Status::Ok)
        }
        JtVerdict::Violated { check, at, witness } => {
            out.emit(
                "verdict",
                json!({ "ok": false, "check": format!("{check:?}"), "at": at, "witness": witness }),
                format!("violated: {check:?} at `{at}`, witness {witness:?}"),
            );
            Ok(Status::Failed)
        }
    }
}
