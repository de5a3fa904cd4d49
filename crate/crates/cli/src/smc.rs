use anyhow::{Context, Result};
use msml::proof::{check_proof, Verdict};
use msml::smc::{
    build_term_model, coherence, elaborate_execution, elaborate_pgm_proof, mem_get_theorem, parse_memory,
    parse_program, pgm_goal, pgm_step_map, show_mem, show_stack, smc_axioms, smc_axioms_for, smc_max, smc_run,
    smc_signature, BoxReading, Memory, Stmt, PGM_SOURCE,
};
use msml::syntax::print_formula;
use msml::Signature;
use serde_json::json;

use crate::logic::read;
use crate::output::Out;
use crate::{SmcAxiomsArgs, SmcRunArgs, SmcVerifyArgs, Status};

fn reading(literal: bool) -> BoxReading {
    if literal {
        BoxReading::Literal
    } else {
        BoxReading::Pdl
    }
}

fn load_program(path: &std::path::Path) -> Result<Stmt> {
    parse_program(&read(path)?).with_context(|| format!("in `{}`", path.display()))
}

pub fn run(out: &Out, a: SmcRunArgs) -> Result<Status> {
    let program = load_program(&a.program)?;
    let mem = parse_memory(&a.mem)?;
    match smc_run(&program, mem, a.budget) {
        Ok(outcome) => {
            for c in &outcome.finals {
                let stack: Vec<String> = c.stack.iter().map(ToString::to_string).collect();
                out.emit(
                    "final",
                    json!({ "memory": c.mem, "stack": stack, "steps": outcome.steps }),
                    format!(
                        "memory: {}\nstack: {}\nsteps: {}",
                        show_mem(&c.mem),
                        show_stack(&c.stack),
                        outcome.steps
                    ),
                );
            }
            Ok(Status::Ok)
        }
        Err(msml::Error::Smc(reason)) => {
            out.emit("stuck", json!({ "reason": reason }), format!("stuck: {reason}"));
            Ok(Status::Failed)
        }
        Err(e) => Err(e.into()),
    }
}

fn emit_proof(out: &Out, sig: &Signature, name: &str, v: &Verdict, steps: usize) -> bool {
    match v {
        Verdict::Accepted { conclusion } => {
            let c = print_formula(sig, conclusion);
            out.emit(
                "proof",
                json!({ "name": name, "accepted": true, "steps": steps, "conclusion": c }),
                format!("{name}: accepted ({steps} steps)\n  {c}"),
            );
            true
        }
        Verdict::Rejected { step, reason } => {
            out.emit(
                "proof",
                json!({ "name": name, "accepted": false, "step": step, "reason": reason }),
                format!("{name}: {v}"),
            );
            false
        }
    }
}

pub fn verify(out: &Out, a: SmcVerifyArgs) -> Result<Status> {
    let box_reading = reading(a.box_literal);
    let program = match &a.program {
        Some(p) => load_program(p)?,
        None => parse_program(PGM_SOURCE)?,
    };
    let mut ok = true;
    if box_reading == BoxReading::Literal {
        out.emit(
            "proof",
            json!({ "name": null, "skipped": true }),
            "proofs: skipped, execution proofs are elaborated for the PDL reading only",
        );
    } else if a.program.is_none() {
        let sig = smc_signature();
        let axioms = smc_axioms();
        let proof = elaborate_pgm_proof()?;
        let v = check_proof(&sig, &axioms, &proof);
        ok &= emit_proof(out, &sig, "pgm", &v, proof.steps.len());
        ok &= v.conclusion() == Some(&pgm_goal());
        for (label, step) in pgm_step_map(&proof) {
            let text = match step {
                Some(k) => format!("  ({label}) = step {k}"),
                None => format!("  ({label}) not proved verbatim"),
            };
            out.emit("step_map", json!({ "label": label, "step": step }), text);
        }
        let get = mem_get_theorem()?;
        ok &= emit_proof(out, &sig, "mem_get", &check_proof(&sig, &axioms, &get), get.steps.len());
    } else {
        let ep = elaborate_execution(&program, a.budget)?;
        let v = check_proof(&ep.sig, &ep.axioms, &ep.proof);
        ok &= emit_proof(out, &ep.sig, "program", &v, ep.proof.steps.len());
    }

    let tm = build_term_model(&program, Memory::new(), a.budget)?;
    let sig = tm.signature().clone();
    let axioms = smc_axioms_for(&sig, box_reading)?;
    let report = coherence(&tm, &axioms, box_reading)?;
    for s in &report.schemes {
        let failures: Vec<_> = s
            .failures
            .iter()
            .map(|(n, inst, w)| json!({ "instance": n, "formula": inst, "world": w }))
            .collect();
        let mut text = format!(
            "{}: {} checked, {} not instantiable, {} over budget, {} failing",
            s.name,
            s.checked,
            s.not_instantiable,
            s.budget_skipped,
            s.failures.len()
        );
        for (n, inst, w) in &s.failures {
            text.push_str(&format!("\n  #{n} fails at {w}: {inst}"));
        }
        out.emit(
            "scheme",
            json!({
                "name": s.name,
                "checked": s.checked,
                "not_instantiable": s.not_instantiable,
                "budget_skipped": s.budget_skipped,
                "failures": failures,
            }),
            text,
        );
    }
    ok &= report.is_ok();
    let verdict = if ok { "ok" } else { "failed" };
    out.emit(
        "verdict",
        json!({ "ok": ok, "reading": format!("{box_reading:?}").to_lowercase(), "instances": report.checked() }),
        format!("{verdict}: {} instances checked", report.checked()),
    );
    Ok(if ok { Status::Ok } else { Status::Failed })
}

pub fn axioms(out: &Out, a: SmcAxiomsArgs) -> Result<Status> {
    let text = smc_max(reading(a.box_literal));
    out.emit("axioms", json!({ "text": text }), &text);
    Ok(Status::Ok)
}
