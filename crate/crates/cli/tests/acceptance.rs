//! One line per acceptance criterion, with its measured runtime.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use msml::algebra::{
    check_bao, complex_algebra, eval, jt_embedding, model_assignment, random_bao, BaoVerdict, JtVerdict, Law,
};
use msml::proof::{
    check_proof, derive_box_conj, derive_cong, derive_dia_disj, derive_mono, dt_global, dt_local, dt_local_inverse,
    gamma_g_chain, globalize, random_global_proof, taut_proof, AxiomSet, Basis, Proof, ProofShape, Verdict,
};
use msml::semantics::{
    enumerate_models, find_countermodel, generated_submodel, global_model_of, globally_true, random_model, truth_set,
    World,
};
use msml::smc::{
    build_term_model, coherence, delete_step, elaborate_pgm_proof, mem_get_theorem, parse_program, pgm_goal,
    smc_axioms, smc_axioms_for, smc_signature, BoxReading, Memory, DEFAULT_BUDGET, PGM_SOURCE,
};
use msml::syntax::{parse_formula, parse_signature, random_formula, random_signature, SigShape};
use msml::{Formula, Signature, Sym};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn unary() -> Arc<Signature> {
    Arc::new(parse_signature("sort s\nop f : s -> s\nvar p : s\nvar q : s\n").unwrap())
}

fn f(sig: &Signature, text: &str) -> Formula {
    parse_formula(sig, text).unwrap()
}

fn conclusion(sig: &Signature, ax: &AxiomSet, proof: &Proof) -> Result<Formula, String> {
    match check_proof(sig, ax, proof) {
        Verdict::Accepted { conclusion } => Ok(conclusion),
        v => Err(v.to_string()),
    }
}

fn pool(sig: &Signature) -> Vec<Sym> {
    sig.all_vars().map(|(v, _)| v.clone()).collect()
}

fn smc_run() -> Outcome {
    let program = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/pgm.smc");
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_msml"))
        .args(["--format", "json", "smc", "run"])
        .arg(&program)
        .output()
        .map_err(|e| e.to_string())?;
    let took = t.elapsed();
    ensure!(out.status.success(), "exit status {}", out.status);
    let text = String::from_utf8_lossy(&out.stdout);
    let r: serde_json::Value = serde_json::from_str(text.lines().last().unwrap_or("")).map_err(|e| e.to_string())?;
    ensure!(r["memory"] == serde_json::json!({ "i1": 1, "i2": 2, "m": 1 }), "memory {}", r["memory"]);
    ensure!(r["stack"] == serde_json::json!([]), "stack {}", r["stack"]);
    ensure!(took < Duration::from_millis(100), "took {took:?}");
    Ok(format!("{{i1=1, i2=2, m=1}}, empty stack, {} steps", r["steps"]))
}

fn smc_proof() -> Outcome {
    let t = Instant::now();
    let sig = smc_signature();
    let ax = smc_axioms();
    let proof = elaborate_pgm_proof().map_err(|e| e.to_string())?;
    ensure!(conclusion(&sig, &ax, &proof)? == pgm_goal(), "wrong conclusion");
    let mem_get = mem_get_theorem().map_err(|e| e.to_string())?;
    conclusion(&sig, &ax, &mem_get)?;
    let checked = t.elapsed();
    ensure!(checked < Duration::from_secs(1), "elaboration and check took {checked:?}");
    let mut mutants = 0;
    for p in [&proof, &mem_get] {
        for k in 1..=p.steps.len() {
            let m = delete_step(p, k);
            let killed = match check_proof(&sig, &ax, &m) {
                Verdict::Accepted { conclusion } => p == &proof && conclusion != pgm_goal(),
                Verdict::Rejected { .. } => true,
            };
            ensure!(killed, "deleting step {k} leaves an accepted proof");
            mutants += 1;
        }
    }
    Ok(format!(
        "{} + {} steps accepted in {checked:?}, {mutants}/{mutants} deletion mutants rejected",
        proof.steps.len(),
        mem_get.steps.len()
    ))
}

fn soundness() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ax = AxiomSet::new(Basis::Standard);
    let (mut proofs, mut with_hyps) = (0, 0);
    for _ in 0..200 {
        let sig = Arc::new(random_signature(SigShape::default(), &mut rng));
        let m = random_model(sig.clone(), 4, &pool(&sig), 0.4, &mut rng).unwrap();
        let sorts: Vec<_> = sig.sorts().collect();
        // hypotheses drawn from the model's own global truths, so every proof is a live case
        let gamma: Vec<Formula> = (0..12)
            .map(|_| random_formula(&sig, sorts[rng.gen_range(0..sorts.len())], 2, &mut rng))
            .filter(|phi| globally_true(&m, phi).unwrap())
            .take(3)
            .collect();
        for _ in 0..100 {
            let proof = random_global_proof(&sig, &gamma, ProofShape::default(), &mut rng);
            let psi = conclusion(&sig, &ax, &proof)?;
            let used = proof.used_hyps();
            ensure!(global_model_of(&m, &used).unwrap(), "hypotheses outside Γ");
            ensure!(global_model_of(&m, &proof.cited_instances()).unwrap(), "an axiom instance fails");
            ensure!(globally_true(&m, &psi).unwrap(), "unsound conclusion {psi:?}");
            proofs += 1;
            with_hyps += usize::from(!used.is_empty());
        }
    }
    let took = t.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!("{proofs} proofs over 200 models ({with_hyps} use hypotheses), no counterexample, {took:?}"))
}

fn bao_laws() -> Outcome {
    let t = Instant::now();
    let sig = Arc::new(parse_signature("sort s\nsort t\nop f : s -> t\nop g : t -> s\nvar p : s\nvar q : t\n").unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut frames, mut planted) = (0usize, 0usize);
    for m in enumerate_models(sig.clone(), 3, &[]).unwrap() {
        let a = complex_algebra(&m.frame).unwrap();
        ensure!(check_bao(&a, &mut rng).is_ok(), "complex algebra of frame {frames} fails");
        if frames % 500 == 0 {
            for op in sig.ops() {
                let d = sig.op_decl(op);
                let top = a.top(d.result_sort);
                let mut n = a.clone();
                n.set_entry(op, &[0], top);
                let v = check_bao(&n, &mut rng);
                ensure!(
                    matches!(&v, BaoVerdict::Violated { law: Law::Normality, witness, .. } if witness == &[0]),
                    "normality defect missed: {v:?}"
                );
                planted += 1;
                if a.num_atoms(d.arg_sorts[0]) >= 2 {
                    let mut bad = a.clone();
                    let joined = a.apply(op, &[1]) | a.apply(op, &[2]);
                    bad.set_entry(op, &[3], joined ^ top);
                    match check_bao(&bad, &mut rng) {
                        BaoVerdict::Violated { law: Law::Additivity, witness, .. } => {
                            let (x, y) = (witness[0], witness[1]);
                            ensure!(
                                bad.apply(op, &[x | y]) != bad.apply(op, &[x]) | bad.apply(op, &[y]),
                                "additivity witness does not violate the law"
                            );
                        }
                        v => return Err(format!("additivity defect missed: {v:?}")),
                    }
                    planted += 1;
                }
            }
        }
        frames += 1;
    }
    let took = t.elapsed();
    ensure!(took < Duration::from_secs(30), "took {took:?}");
    Ok(format!("{frames} frames satisfy (N)/(A), {planted} planted defects caught, {took:?}"))
}

fn jonsson_tarski() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let run = |bao: &msml::algebra::Bao, rng: &mut ChaCha8Rng| -> Result<(), String> {
        let r = jt_embedding(bao, rng).map_err(|e| e.to_string())?;
        ensure!(r.verdict == JtVerdict::Ok, "{:?}", r.verdict);
        for s in bao.signature().sorts() {
            ensure!(r.frame.num_worlds(s) == bao.num_atoms(s), "ultrafilters differ from atoms");
        }
        Ok(())
    };
    for _ in 0..100 {
        let sig = Arc::new(random_signature(SigShape::default(), &mut rng));
        let m = random_model(sig, 3, &[], 0.4, &mut rng).unwrap();
        run(&complex_algebra(&m.frame).unwrap(), &mut rng)?;
    }
    for _ in 0..100 {
        let sig = Arc::new(random_signature(SigShape::default(), &mut rng));
        run(&random_bao(sig, 3, 0.4, &mut rng).unwrap(), &mut rng)?;
    }
    let took = t.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!("100 complex + 100 random algebras embed, {took:?}"))
}

fn bridge() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let sig = Arc::new(random_signature(SigShape::default(), &mut rng));
        let m = random_model(sig.clone(), 3, &pool(&sig), 0.4, &mut rng).unwrap();
        let a = complex_algebra(&m.frame).unwrap();
        let e = model_assignment(&m).unwrap();
        let sorts: Vec<_> = sig.sorts().collect();
        let phi = random_formula(&sig, sorts[rng.gen_range(0..sorts.len())], 4, &mut rng);
        let want = truth_set(&m, &phi).unwrap().ones().fold(0, |acc, w| acc | 1 << w);
        ensure!(eval(&sig, &a, &e, &phi).unwrap() == want, "eval differs on {phi:?}");
    }
    let took = t.elapsed();
    ensure!(took < Duration::from_secs(10), "took {took:?}");
    Ok(format!("100 pairs agree, {took:?}"))
}

fn transforms() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ax = AxiomSet::new(Basis::Standard);
    for _ in 0..50 {
        let sig = Arc::new(random_signature(SigShape::default(), &mut rng));
        let sorts: Vec<_> = sig.sorts().collect();
        let hyps: Vec<Formula> = (0..rng.gen_range(1..=3))
            .map(|_| random_formula(&sig, sorts[rng.gen_range(0..sorts.len())], 2, &mut rng))
            .collect();
        let proof = random_global_proof(&sig, &hyps, ProofShape::default(), &mut rng);
        let psi = conclusion(&sig, &ax, &proof)?;

        let g = globalize(&sig, &ax, &proof).map_err(|e| e.to_string())?;
        ensure!(conclusion(&sig, &ax, &g.proof)? == psi, "globalize changed the conclusion");
        for w in g.proof.witness_formulas() {
            ensure!(gamma_g_chain(&hyps, &w).is_some(), "witness outside Γ_G");
        }
        let phi = &hyps[0];
        let d = dt_global(&sig, &ax, &proof, phi).map_err(|e| e.to_string())?;
        let c = conclusion(&sig, &ax, &d.proof)?;
        ensure!(c.as_implication().is_some_and(|(_, r)| r == &psi), "dt_global conclusion {c:?}");
        for ch in &d.chains {
            ensure!(gamma_g_chain(std::slice::from_ref(phi), &ch.formula()).is_some(), "witness outside {{φ}}_G");
        }
        if let Some(w) = g.proof.witness_formulas().last().cloned() {
            let out = dt_local(&sig, &ax, &g.proof, &w).map_err(|e| e.to_string())?;
            ensure!(conclusion(&sig, &ax, &out)? == w.clone().implies(psi.clone()), "dt_local conclusion");
            let back = dt_local_inverse(&sig, &ax, &out).map_err(|e| e.to_string())?;
            ensure!(conclusion(&sig, &ax, &back)? == psi, "round trip changed the conclusion");
        }
    }
    let took = t.elapsed();
    ensure!(took < Duration::from_secs(30), "took {took:?}");
    Ok(format!("50 proofs transformed and rechecked, {took:?}"))
}

/// Every formula of depth at most `depth` over `vars`, built from `!`, `|` and `f`.
fn all_formulas(vars: &[&str], depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = vars.iter().map(|v| Formula::var(v)).collect();
    let mut prev = 0;
    for _ in 0..depth {
        let cur = all.len();
        let mut next = Vec::new();
        for (i, a) in all.iter().enumerate() {
            let fresh_a = i >= prev;
            if fresh_a {
                next.push(a.clone().not());
                next.push(Formula::app("f", [a.clone()]));
            }
            for (j, b) in all.iter().enumerate() {
                if fresh_a || j >= prev {
                    next.push(a.clone().or(b.clone()));
                }
            }
        }
        prev = cur;
        all.extend(next);
    }
    all
}

fn submodels() -> Outcome {
    let t = Instant::now();
    let sig = unary();
    let s = sig.sort("s").unwrap();
    let formulas = all_formulas(&["p", "q"], 3);
    let vars: Vec<Sym> = pool(&sig);
    let mut models = 0;
    for m in enumerate_models(sig.clone(), 2, &vars).unwrap() {
        let full: Vec<_> = formulas.iter().map(|phi| truth_set(&m, phi).unwrap()).collect();
        for w in 0..m.frame.num_worlds(s) as World {
            let sub = generated_submodel(&m, &[(s, w)]).unwrap();
            let map = &sub.map[s.index()];
            for (phi, set) in formulas.iter().zip(&full) {
                let small = truth_set(&sub.model, phi).unwrap();
                for (old, new) in map.iter().enumerate() {
                    if let Some(new) = new {
                        ensure!(small.contains(*new as usize) == set.contains(old), "{phi:?} changes at world {old}");
                    }
                }
            }
        }
        models += 1;
    }
    ensure!(models > 0, "no models enumerated");
    Ok(format!("{models} models x {} formulas invariant, {:?}", formulas.len(), t.elapsed()))
}

fn term_model() -> Outcome {
    let t = Instant::now();
    let run = || -> Result<_, String> {
        let tm = build_term_model(&parse_program(PGM_SOURCE).unwrap(), Memory::new(), DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        let ax = smc_axioms_for(tm.signature(), BoxReading::Pdl).map_err(|e| e.to_string())?;
        coherence(&tm, &ax, BoxReading::Pdl).map_err(|e| e.to_string())
    };
    let first = run()?;
    ensure!(first.is_ok(), "failing instances: {:?}", first.schemes.iter().find(|s| !s.failures.is_empty()));
    let star = first.schemes.iter().find(|s| s.name == "Astar").ok_or("no Astar scheme")?;
    ensure!(star.checked > 0, "no A* instance checked");
    ensure!(run()? == first, "instance numbering changed between runs");
    let skipped: usize = first.schemes.iter().map(|s| s.budget_skipped).sum();
    Ok(format!(
        "{} instances hold ({} A*, {skipped} budget-skipped), stable across runs, {:?}",
        first.checked(),
        star.checked,
        t.elapsed()
    ))
}

fn countermodels() -> Outcome {
    let t = Instant::now();
    let sig = unary();
    let non_theorems = [
        "p -> [f](p)",
        "f(p) -> p",
        "[f](p) -> p",
        "p -> [f](f(p))",
        "[f](p) -> [f]([f](p))",
        "[f](p) -> f(p)",
        "f(p) -> [f](p)",
        "f(p) & f(q) -> f(p & q)",
        "[f](p | q) -> [f](p) | [f](q)",
        "f([f](p)) -> [f](f(p))",
    ];
    for text in non_theorems {
        ensure!(find_countermodel(sig.clone(), &f(&sig, text), 2).unwrap().is_some(), "`{text}` not refuted");
    }
    let taut = |text: &str| taut_proof(&sig, f(&sig, text)).unwrap();
    let pair = |a: &str, b: &str| (f(&sig, a), f(&sig, b));
    let mut theorems: Vec<Proof> = Vec::new();
    for (a, b) in [pair("p", "q"), pair("f(p)", "!q"), pair("p", "p")] {
        theorems.push(derive_box_conj(&sig, "f", 1, &[], &a, &b).unwrap());
    }
    for (a, b) in [pair("p", "q"), pair("[f](p)", "p -> q"), pair("!p", "f(q)")] {
        theorems.push(derive_dia_disj(&sig, "f", 1, &[], &a, &b).unwrap());
    }
    for premise in ["p & q -> p", "p -> p | q"] {
        theorems.push(derive_mono(&sig, "f", 1, &[], &taut(premise)).unwrap());
    }
    for premise in ["p <-> !!p", "p & q <-> q & p"] {
        theorems.push(derive_cong(&sig, "f", 1, &[], &taut(premise)).unwrap());
    }
    let ax = AxiomSet::new(Basis::Standard);
    for proof in &theorems {
        let phi = conclusion(&sig, &ax, proof)?;
        ensure!(find_countermodel(sig.clone(), &phi, 3).unwrap().is_none(), "theorem {phi:?} refuted");
    }
    Ok(format!("10 non-theorems refuted at 2 worlds, {} theorems survive 3 worlds, {:?}", theorems.len(), t.elapsed()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("smc run of the example program", smc_run),
        ("execution proof, mem_get and mutants", smc_proof),
        ("soundness fuzz", soundness),
        ("(N)/(A) on complex algebras", bao_laws),
        ("Jonsson-Tarski embedding", jonsson_tarski),
        ("algebraic eval is satisfaction", bridge),
        ("deduction-theorem transformations", transforms),
        ("generated submodel invariance", submodels),
        ("term-model coherence", term_model),
        ("countermodel search", countermodels),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed += 1;
            }
        }
    }
    println!("{} of {} criteria met", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
