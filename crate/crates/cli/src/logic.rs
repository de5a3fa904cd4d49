use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use msml::proof::{
    check_proof as run_checker, derive_box_conj, derive_cong, derive_dia_disj, derive_mono, dt_local, dt_global,
    gamma_closure, globalize, parse_axioms, parse_formula_list, parse_proof, taut_proof, write_proof, AxiomSet, Basis,
    GammaChain, Proof, Verdict,
};
use msml::semantics::{failing_world, find_countermodel, parse_model, satisfies, truth_set};
use msml::syntax::{parse_formula, parse_signature, print_formula};
use msml::{Formula, Signature};
use serde_json::json;

use crate::output::Out;
use crate::{
    CheckProofArgs, DeriveArgs, DeriveKind, EnumerateArgs, GammaArgs, ModelCheckArgs, ParseArgs, Status, TransformArgs,
    TransformKind,
};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read `{}`", path.display()))
}

pub fn load_sig(path: &Path) -> Result<Signature> {
    parse_signature(&read(path)?).with_context(|| format!("in `{}`", path.display()))
}

fn load_axioms(sig: &Signature, path: Option<&Path>) -> Result<AxiomSet> {
    match path {
        Some(p) => parse_axioms(sig, &read(p)?).with_context(|| format!("in `{}`", p.display())),
        None => Ok(AxiomSet::new(Basis::Standard)),
    }
}

fn load_proof(sig: &Signature, path: &Path) -> Result<Proof> {
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let load = |name: &str| {
        fs::read_to_string(dir.join(name))
            .map_err(|e| msml::Error::Proof(format!("cannot read hypothesis file `{name}`: {e}")))
    };
    parse_proof(sig, &read(path)?, &load).with_context(|| format!("in `{}`", path.display()))
}

fn formula(sig: &Signature, text: &str) -> Result<Formula> {
    parse_formula(sig, text).with_context(|| format!("in formula `{text}`"))
}

fn show_chain(sig: &Signature, c: &GammaChain) -> serde_json::Value {
    json!({
        "member": print_formula(sig, &c.formula()),
        "base": print_formula(sig, &c.base),
        "layers": c.layers.iter().map(|l| json!({
            "op": &*l.op,
            "pos": l.pos,
            "sides": l.sides.iter().map(|f| print_formula(sig, f)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn emit_verdict(out: &Out, sig: &Signature, v: &Verdict) -> Status {
    match v {
        Verdict::Accepted { conclusion } => {
            let c = print_formula(sig, conclusion);
            out.emit("verdict", json!({ "accepted": true, "conclusion": c }), format!("accepted: {c}"));
            Status::Ok
        }
        Verdict::Rejected { step, reason } => {
            out.emit(
                "verdict",
                json!({ "accepted": false, "step": step, "reason": reason }),
                v.to_string(),
            );
            Status::Failed
        }
    }
}

pub fn parse(out: &Out, a: ParseArgs) -> Result<Status> {
    if let Some(p) = &a.program {
        let prog = msml::smc::parse_program(&read(p)?).with_context(|| format!("in `{}`", p.display()))?;
        out.emit("program", json!({ "text": prog.to_string() }), prog.to_string());
    }
    let needs_sig = !a.formula.is_empty()
        || a.formulas.is_some()
        || a.model.is_some()
        || a.axioms.is_some()
        || a.proof.is_some()
        || a.algebra.is_some();
    let sig = match &a.sig {
        Some(p) => Arc::new(load_sig(p)?),
        None if needs_sig => bail!("--sig is required to parse formulas, models, axioms, proofs or algebras"),
        None if a.program.is_none() => bail!("nothing to parse"),
        None => return Ok(Status::Ok),
    };
    out.emit(
        "signature",
        json!({ "sorts": sig.num_sorts(), "ops": sig.num_ops(), "text": sig.to_msig() }),
        sig.to_msig(),
    );
    let mut formulas = Vec::new();
    for t in &a.formula {
        formulas.push(formula(&sig, t)?);
    }
    if let Some(p) = &a.formulas {
        formulas.extend(parse_formula_list(&sig, &read(p)?).with_context(|| format!("in `{}`", p.display()))?);
    }
    for f in &formulas {
        let sort = sig.sort_name(sig.sort_of(f)?);
        let text = print_formula(&sig, f);
        out.emit("formula", json!({ "text": text, "sort": &**sort }), format!("{text} : {sort}"));
    }
    if let Some(p) = &a.model {
        let m = parse_model(sig.clone(), &read(p)?).with_context(|| format!("in `{}`", p.display()))?;
        out.emit("model", json!({ "text": m.to_mmod() }), m.to_mmod());
    }
    if let Some(p) = &a.axioms {
        let ax = load_axioms(&sig, Some(p))?;
        out.emit("axioms", json!({ "text": ax.to_max(&sig) }), ax.to_max(&sig));
    }
    if let Some(p) = &a.proof {
        let proof = load_proof(&sig, p)?;
        out.emit("proof", json!({ "text": write_proof(&sig, &proof) }), write_proof(&sig, &proof));
    }
    if let Some(p) = &a.algebra {
        let bao = msml::algebra::parse_bao(sig.clone(), &read(p)?).with_context(|| format!("in `{}`", p.display()))?;
        let text = msml::algebra::write_bao(&bao);
        out.emit("algebra", json!({ "text": text }), text);
    }
    Ok(Status::Ok)
}

pub fn model_check(out: &Out, a: ModelCheckArgs) -> Result<Status> {
    let sig = Arc::new(load_sig(&a.sig)?);
    let model = parse_model(sig.clone(), &read(&a.model)?).with_context(|| format!("in `{}`", a.model.display()))?;
    let phi = formula(&sig, &a.formula)?;
    let sort = sig.sort_of(&phi)?;
    let name = |w| model.frame.world_name(sort, w).to_string();
    if let Some(wname) = &a.world {
        let (s, w) = model
            .frame
            .find_world(wname)
            .ok_or_else(|| anyhow!("no world named `{wname}`"))?;
        if s != sort {
            bail!("world `{wname}` has sort `{}`, the formula has sort `{}`", sig.sort_name(s), sig.sort_name(sort));
        }
        let holds = satisfies(&model, w, &phi)?;
        let verb = if holds { "holds" } else { "fails" };
        out.emit("check", json!({ "world": wname, "holds": holds }), format!("{verb} at {wname}"));
        return Ok(if holds { Status::Ok } else { Status::Failed });
    }
    if a.all_worlds {
        let set = truth_set(&model, &phi)?;
        for w in model.frame.worlds(sort) {
            let holds = set.contains(w as usize);
            out.emit(
                "world",
                json!({ "world": name(w), "holds": holds }),
                format!("{}: {}", name(w), if holds { "true" } else { "false" }),
            );
        }
    }
    match failing_world(&model, &phi)? {
        None => {
            out.emit("check", json!({ "world": null, "holds": true }), "holds at every world");
            Ok(Status::Ok)
        }
        Some(w) => {
            out.emit(
                "check",
                json!({ "world": name(w), "holds": false }),
                format!("fails at {}", name(w)),
            );
            Ok(Status::Failed)
        }
    }
}

pub fn check_proof(out: &Out, a: CheckProofArgs) -> Result<Status> {
    let sig = load_sig(&a.sig)?;
    let axioms = load_axioms(&sig, a.axioms.as_deref())?;
    let proof = load_proof(&sig, &a.proof)?;
    Ok(emit_verdict(out, &sig, &run_checker(&sig, &axioms, &proof)))
}

pub fn transform(out: &Out, a: TransformArgs) -> Result<Status> {
    let sig = load_sig(&a.sig)?;
    let axioms = load_axioms(&sig, a.axioms.as_deref())?;
    let proof = load_proof(&sig, &a.proof)?;
    let phi = match &a.phi {
        Some(t) => Some(formula(&sig, t)?),
        None => None,
    };
    let need_phi = || phi.clone().ok_or_else(|| anyhow!("--phi names the hypothesis to discharge"));
    let (result, chains) = match a.kind {
        TransformKind::DtLocal => (dt_local(&sig, &axioms, &proof, &need_phi()?)?, Vec::new()),
        TransformKind::Globalize => {
            let g = globalize(&sig, &axioms, &proof)?;
            (g.proof, g.chains)
        }
        TransformKind::DtGlobal => {
            let g = dt_global(&sig, &axioms, &proof, &need_phi()?)?;
            (g.proof, g.chains)
        }
    };
    let text = write_proof(&sig, &result);
    match &a.out {
        Some(p) => fs::write(p, &text).with_context(|| format!("cannot write `{}`", p.display()))?,
        None => out.emit("proof", json!({ "text": text }), &text),
    }
    for c in &chains {
        let j = show_chain(&sig, c);
        let t = format!("witness {} from {}", j["member"].as_str().unwrap_or(""), j["base"].as_str().unwrap_or(""));
        out.emit("witness", j, t);
    }
    Ok(emit_verdict(out, &sig, &run_checker(&sig, &axioms, &result)))
}

pub fn gamma(out: &Out, a: GammaArgs) -> Result<Status> {
    let sig = load_sig(&a.sig)?;
    let mut g = Vec::new();
    if let Some(p) = &a.hyps {
        g.extend(parse_formula_list(&sig, &read(p)?).with_context(|| format!("in `{}`", p.display()))?);
    }
    for t in &a.formula {
        g.push(formula(&sig, t)?);
    }
    if g.is_empty() {
        bail!("give Γ with --hyps or --formula");
    }
    let sides: Vec<Formula> = if a.side.is_empty() {
        sig.sorts().map(|s| Formula::Var(sig.canonical_var(s).clone())).collect()
    } else {
        a.side.iter().map(|t| formula(&sig, t)).collect::<Result<_>>()?
    };
    let closure = gamma_closure(&sig, &g, a.depth, &sides)?;
    for f in &closure {
        let text = print_formula(&sig, f);
        out.emit("member", json!({ "formula": text }), &text);
    }
    out.emit(
        "summary",
        json!({ "depth": a.depth, "members": closure.len() }),
        format!("# {} members at depth {}", closure.len(), a.depth),
    );
    Ok(Status::Ok)
}

pub fn derive(out: &Out, a: DeriveArgs) -> Result<Status> {
    let sig = load_sig(&a.sig)?;
    let sides: Vec<Formula> = a.side.iter().map(|t| formula(&sig, t)).collect::<Result<_>>()?;
    let premise = || -> Result<Proof> {
        match (&a.premise, &a.taut) {
            (Some(p), _) => load_proof(&sig, p),
            (None, Some(t)) => Ok(taut_proof(&sig, formula(&sig, t)?)?),
            (None, None) => bail!("give the premise with --premise or --taut"),
        }
    };
    let pair = || -> Result<(Formula, Formula)> {
        match (&a.phi, &a.phi2) {
            (Some(x), Some(y)) => Ok((formula(&sig, x)?, formula(&sig, y)?)),
            _ => bail!("give --phi and --phi2"),
        }
    };
    let proof = match a.kind {
        DeriveKind::Mono => derive_mono(&sig, &a.op, a.pos, &sides, &premise()?)?,
        DeriveKind::Cong => derive_cong(&sig, &a.op, a.pos, &sides, &premise()?)?,
        DeriveKind::BoxConj => {
            let (x, y) = pair()?;
            derive_box_conj(&sig, &a.op, a.pos, &sides, &x, &y)?
        }
        DeriveKind::DiaDisj => {
            let (x, y) = pair()?;
            derive_dia_disj(&sig, &a.op, a.pos, &sides, &x, &y)?
        }
    };
    let text = write_proof(&sig, &proof);
    out.emit("proof", json!({ "text": text, "steps": proof.steps.len() }), &text);
    Ok(emit_verdict(out, &sig, &run_checker(&sig, &AxiomSet::new(Basis::Standard), &proof)))
}

pub fn enumerate(out: &Out, a: EnumerateArgs) -> Result<Status> {
    let sig = Arc::new(load_sig(&a.sig)?);
    let phi = formula(&sig, &a.refute)?;
    let sort = sig.sort_of(&phi)?;
    match find_countermodel(sig.clone(), &phi, a.max_worlds)? {
        Some(cm) => {
            let world = cm.model.frame.world_name(sort, cm.world).to_string();
            let mmod = cm.model.to_mmod();
            out.emit(
                "countermodel",
                json!({ "world": world, "index": cm.index, "model": mmod }),
                format!("refuted at {world} in model #{}\n{mmod}", cm.index),
            );
            Ok(Status::Failed)
        }
        None => {
            out.emit(
                "countermodel",
                json!({ "world": null, "max_worlds": a.max_worlds }),
                format!("no countermodel with at most {} worlds per sort", a.max_worlds),
            );
            Ok(Status::Ok)
        }
    }
}

