use std::collections::BTreeMap;

use msml::proof::{binding, check_proof, Verdict};
use msml::semantics::{failing_world, find_countermodel, globally_true, satisfies, truth_set};
use msml::smc::*;
use msml::syntax::{parse_formula, parse_signature, print_formula};
use msml::Formula;
use proptest::prelude::*;

fn mem(pairs: &[(&str, u64)]) -> Memory {
    pairs.iter().map(|(x, n)| (x.to_string(), *n)).collect()
}

fn run(src: &str) -> RunOutcome {
    smc_run(&parse_program(src).unwrap(), Memory::new(), DEFAULT_BUDGET).unwrap()
}

#[test]
fn programs_print_and_parse_back() {
    for src in [
        PGM_SOURCE,
        "skip",
        "while i1 <= 3 do i1 := i1 + 1",
        "x := 1; (y := 2; z := x + y)",
        "if 0 <= 1 then (a := 1; b := 2) else skip",
    ] {
        let s = parse_program(src).unwrap();
        assert_eq!(parse_program(&s.to_string()).unwrap(), s, "{src}");
    }
    assert!(parse_program("x := ").is_err());
    assert!(parse_program("if x then skip").is_err());
}

#[test]
fn statement_sequencing_is_left_associative() {
    let s = parse_program("a := 1; b := 2; c := 3").unwrap();
    let Stmt::Seq(first, _) = s else { panic!() };
    assert!(matches!(*first, Stmt::Seq(..)));
}

#[test]
fn pgm_runs_to_its_expected_state() {
    let out = run(PGM_SOURCE);
    assert_eq!(out.finals.len(), 1);
    assert!(out.finals[0].stack.is_empty());
    assert_eq!(out.finals[0].mem, mem(&[("i1", 1), ("i2", 2), ("m", 1)]));
}

#[test]
fn else_branch_and_loops() {
    let out = run("i1 := 3; i2 := 2; if i1 <= i2 then m := i1 else m := i2");
    assert_eq!(out.finals[0].mem["m"], 2);
    let out = run("while i1 <= 4 do i1 := i1 + 2");
    assert_eq!(out.finals[0].mem, mem(&[("i1", 6)]));
    assert!(run("while 1 <= 0 do skip").finals[0].mem.is_empty());
    assert!(run("skip").finals[0].mem.is_empty());
}

#[test]
fn divergence_hits_the_budget() {
    let p = parse_program("while 0 <= 1 do skip").unwrap();
    let e = smc_run(&p, Memory::new(), 500).unwrap_err();
    assert!(e.to_string().contains("budget"), "{e}");
}

#[test]
fn comparison_order_on_the_stack() {
    for a in 0..3u64 {
        for b in 0..3u64 {
            let src = format!("if {a} <= {b} then m := 1 else m := 2");
            let out = run(&src);
            assert_eq!(out.finals[0].mem["m"], if a <= b { 1 } else { 2 }, "{src}");
        }
    }
}

#[test]
fn leq_trace_pushes_the_right_operand_first() {
    for a in 0..3u64 {
        for b in 0..3u64 {
            let ctrl = Ctrl::B(BExp::Le(AExp::Num(a), AExp::Num(b)));
            let mut cfg = Config::new(Memory::new());
            let mut pending = vec![ctrl];
            let mut pushes = Vec::new();
            while let Some(c) = pending.pop() {
                let mut next = smc_step(&cfg, &c).unwrap();
                assert_eq!(next.len(), 1);
                let (c2, rest) = next.pop().unwrap();
                if c2.stack.len() > cfg.stack.len() && c2.stack.len() <= 2 && !matches!(c, Ctrl::Leq) {
                    pushes.push(c2.stack[0]);
                }
                cfg = c2;
                if let Some(r) = rest {
                    match r {
                        Ctrl::Seq(x, y) => {
                            pending.push(*y);
                            pending.push(*x);
                        }
                        r => pending.push(r),
                    }
                }
            }
            assert_eq!(pushes, vec![Value::Nat(b), Value::Nat(a)]);
            assert_eq!(cfg.stack, vec![Value::Bool(a <= b)]);
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let p = parse_program("i1 := 0; while i1 <= 3 do (i2 := i2 + i1; i1 := i1 + 1)").unwrap();
    let a = smc_run(&p, Memory::new(), DEFAULT_BUDGET).unwrap();
    let b = smc_run(&p, Memory::new(), DEFAULT_BUDGET).unwrap();
    assert_eq!(a.finals, b.finals);
    assert_eq!(a.steps, b.steps);
    assert_eq!(a.finals[0].mem, mem(&[("i1", 4), ("i2", 6)]));
}

#[test]
fn memory_text() {
    assert_eq!(parse_memory("x=1, y=2").unwrap(), mem(&[("x", 1), ("y", 2)]));
    assert!(parse_memory("").unwrap().is_empty());
    assert!(parse_memory("x").is_err());
}

#[test]
fn scheme_instances_have_the_expected_shape() {
    let sig = smc_signature();
    let ax = smc_axioms();
    let show = |f: &Formula| print_formula(&sig, f);
    let aplus = ax.get("Aplus").unwrap();
    let inst = aplus
        .instantiate(
            &sig,
            &binding([
                ("VS", Formula::var("vs")),
                ("M", Formula::var("mem")),
                ("N", nat_term(3)),
                ("N1", nat_term(1)),
                ("N2", nat_term(2)),
            ]),
        )
        .unwrap();
    let expect = parse_formula(
        &sig,
        "config(cons(vnat(2), cons(vnat(1), vs)), mem) -> !exec(plus, !config(cons(vnat(3), vs), mem))",
    )
    .unwrap();
    assert_eq!(inst, expect, "{}", show(&inst));
    let bad = aplus.instantiate(
        &sig,
        &binding([
            ("VS", Formula::var("vs")),
            ("M", Formula::var("mem")),
            ("N", nat_term(4)),
            ("N1", nat_term(1)),
            ("N2", nat_term(2)),
        ]),
    );
    assert!(bad.is_err());
    let antest = ax.get("Antest").unwrap();
    let same = binding([
        ("V", Formula::var("val")),
        ("V2", Formula::var("val")),
        ("VS", Formula::var("vs")),
        ("M", Formula::var("mem")),
        ("G", Formula::var("gamma")),
    ]);
    assert!(antest.instantiate(&sig, &same).is_err());
    let dwhile = ax.get("Dwhile").unwrap();
    let inst = dwhile
        .instantiate(&sig, &binding([("B", Formula::var("bv")), ("S", Formula::var("sv"))]))
        .unwrap();
    let expect = parse_formula(
        &sig,
        "cs(while(bv, sv)) <-> seq(cb(bv), seq(star(seq(test(vbool(true)), seq(cs(sv), cb(bv)))), test(vbool(false))))",
    )
    .unwrap();
    assert_eq!(inst, expect);
}

#[test]
fn expansions_agree_with_the_decomposition_axioms() {
    let p = parse_program("while i1 <= 2 do (i1 := i1 + 1; skip)").unwrap();
    let Stmt::While(b, s) = &p else { panic!() };
    let ctrl = Ctrl::S(p.clone());
    let want = Ctrl::Seq(
        Box::new(Ctrl::B(b.clone())),
        Box::new(Ctrl::Seq(
            Box::new(Ctrl::Star(Box::new(Ctrl::Seq(
                Box::new(Ctrl::Test(Value::Bool(true))),
                Box::new(Ctrl::Seq(Box::new(Ctrl::S((**s).clone())), Box::new(Ctrl::B(b.clone())))),
            )))),
            Box::new(Ctrl::Test(Value::Bool(false))),
        )),
    );
    assert_eq!(ctrl.expansion().unwrap(), want);
}

fn set_term(m: &Formula, x: &str, n: u64) -> Formula {
    Formula::app("set", [m.clone(), Formula::constant(x), nat_term(n)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // Any two set-terms denoting the same memory are the same world of the term model.
    #[test]
    fn memory_worlds_are_canonical(
        writes in prop::collection::vec((0usize..3, 0u64..3), 0..=4),
        seed in any::<u64>(),
    ) {
        let vars = ["i1", "i2", "m"];
        let mut direct = Formula::constant("empty");
        let mut expect = Memory::new();
        for (x, n) in &writes {
            direct = set_term(&direct, vars[*x], *n);
            expect.insert(vars[*x].to_string(), *n);
        }
        // the final writes only, in a rotated order
        let finals: Vec<(&String, &u64)> = expect.iter().collect();
        let k = if finals.is_empty() { 0 } else { (seed as usize) % finals.len() };
        let mut other = Formula::constant("empty");
        for (x, n) in finals[k..].iter().chain(finals[..k].iter()) {
            other = set_term(&other, x, **n);
        }
        let tm = all_memories_model();
        let a = truth_set(&tm, &direct).unwrap();
        let b = truth_set(&tm, &other).unwrap();
        prop_assert_eq!(a.count_ones(..), 1);
        prop_assert_eq!(a, b);
    }
}

fn all_memories_model() -> msml::semantics::Model {
    let nats = [0, 1, 2].into_iter().collect();
    let vars = ["i1", "i2", "m"].iter().map(|x| x.to_string()).collect();
    memory_model(&nats, &vars).unwrap()
}

#[test]
fn the_memory_fragment_has_every_partial_memory() {
    let model = all_memories_model();
    let sig = model.signature().clone();
    assert_eq!(model.frame.num_worlds(sig.sort("Mem").unwrap()), 64);
}

#[test]
fn term_model_is_coherent_with_the_axioms_on_pgm() {
    let tm = build_term_model(&parse_program(PGM_SOURCE).unwrap(), Memory::new(), DEFAULT_BUDGET).unwrap();
    let sig = tm.signature().clone();
    let ax = smc_axioms_for(&sig, BoxReading::Pdl).unwrap();
    let report = coherence(&tm, &ax, BoxReading::Pdl).unwrap();
    for s in &report.schemes {
        assert!(s.failures.is_empty(), "{}: {:?}", s.name, s.failures);
    }
    assert!(report.is_ok());
    assert!(report.checked() > 0);
    assert!(tm.truncated.is_empty());
}

#[test]
fn term_model_is_coherent_on_loops_and_addition() {
    let src = "i2 := 1; i1 := 0; while i1 <= 1 do (i1 := i1 + i2; skip)";
    let tm = build_term_model(&parse_program(src).unwrap(), Memory::new(), DEFAULT_BUDGET).unwrap();
    let sig = tm.signature().clone();
    let ax = smc_axioms_for(&sig, BoxReading::Pdl).unwrap();
    let report = coherence(&tm, &ax, BoxReading::Pdl).unwrap();
    for s in &report.schemes {
        assert!(s.failures.is_empty(), "{}: {:?}", s.name, s.failures);
        if !["Dif", "Achoice"].contains(&s.name.as_str()) {
            assert!(s.checked > 0, "{} never instantiated", s.name);
        }
    }
}

#[test]
fn literal_reading_differs() {
    let tm = build_term_model(&parse_program(PGM_SOURCE).unwrap(), Memory::new(), DEFAULT_BUDGET).unwrap();
    let sig = tm.signature().clone();
    let ax = smc_axioms_for(&sig, BoxReading::Literal).unwrap();
    let report = coherence(&tm, &ax, BoxReading::Literal).unwrap();
    assert!(!report.is_ok());
}

fn accepted(sig: &msml::Signature, ax: &msml::proof::AxiomSet, p: &msml::proof::Proof) -> Formula {
    match check_proof(sig, ax, p) {
        Verdict::Accepted { conclusion } => conclusion,
        v => panic!("{v}"),
    }
}

#[test]
fn pgm_proof_checks_and_proves_the_property() {
    let sig = smc_signature();
    let ax = smc_axioms();
    let proof = elaborate_pgm_proof().unwrap();
    assert_eq!(accepted(&sig, &ax, &proof), pgm_goal());
    let text = print_formula(&sig, &pgm_goal());
    assert!(text.contains("set(set(set(mem, i2, 2), i1, 1), m, 1)"), "{text}");
}

#[test]
fn pgm_proof_uses_every_step() {
    let sig = smc_signature();
    let ax = smc_axioms();
    let proof = elaborate_pgm_proof().unwrap();
    for k in 1..=proof.steps.len() {
        let mutant = delete_step(&proof, k);
        assert!(
            matches!(check_proof(&sig, &ax, &mutant), Verdict::Rejected { .. }),
            "deleting step {k} still checks"
        );
    }
}

#[test]
fn written_steps_found_in_the_elaboration() {
    let proof = elaborate_pgm_proof().unwrap();
    let map: BTreeMap<_, _> = pgm_step_map(&proof).into_iter().collect();
    for label in ["1", "2", "6", "7", "12", "15", "17", "18", "19", "23"] {
        assert!(map[label].is_some(), "step ({label}) missing");
    }
}

#[test]
fn the_conclusion_holds_in_the_term_model() {
    let tm = build_term_model(&parse_program(PGM_SOURCE).unwrap(), Memory::new(), DEFAULT_BUDGET).unwrap();
    let sig = tm.signature().clone();
    let find = |sort: &str, t: &Formula| {
        tm.term_worlds(sig.sort(sort).unwrap())
            .find(|(_, f)| *f == t)
            .map(|(w, _)| w)
            .unwrap()
    };
    let nil = find("ValStack", &Formula::constant("nil"));
    let empty = find("Mem", &Formula::constant("empty"));
    let mut model = tm.model.clone();
    model.set_valuation("vs", &[nil]).unwrap();
    model.set_valuation("mem", &[empty]).unwrap();
    assert!(satisfies(&model, tm.start, &pgm_goal()).unwrap());
    assert!(globally_true(&model, &pgm_goal()).unwrap());
}

#[test]
fn general_programs_elaborate() {
    for src in [
        PGM_SOURCE,
        "i1 := 3; i2 := 2; if i1 <= i2 then m := i1 else m := i2",
        "i1 := 1; i1 := i1 + 2; skip",
        "i1 := 0; while i1 <= 1 do i1 := i1 + 1",
    ] {
        let ep = elaborate_execution(&parse_program(src).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(accepted(&ep.sig, &ep.axioms, &ep.proof), ep.conclusion, "{src}");
    }
    // reading a variable that was never assigned is out of reach
    assert!(elaborate_execution(&parse_program("m := i1").unwrap(), DEFAULT_BUDGET).is_err());
}

#[test]
fn mem_get_is_an_instance() {
    let sig = smc_signature();
    let ax = smc_axioms();
    let proof = mem_get_theorem().unwrap();
    let c = accepted(&sig, &ax, &proof);
    assert_eq!(print_formula(&sig, &c), "set(set(set(mem, i2, 2), i1, 1), m, 1) -> get(m, 1)");
}

#[test]
fn amem3_instance() {
    let sig = smc_signature();
    let ax = smc_axioms();
    let inst = ax
        .get("AMem3")
        .unwrap()
        .instantiate(
            &sig,
            &binding([
                ("M", Formula::var("mem")),
                ("X", Formula::constant("m")),
                ("N", nat_term(2)),
                ("N2", nat_term(1)),
            ]),
        )
        .unwrap();
    let expect = parse_formula(&sig, "set(set(mem, m, 2), m, 1) <-> set(mem, m, 1)").unwrap();
    assert_eq!(inst, expect);
    let tm = all_memories_model();
    let lhs = set_term(&set_term(&Formula::constant("empty"), "m", 2), "m", 1);
    let rhs = set_term(&Formula::constant("empty"), "m", 1);
    assert_eq!(truth_set(&tm, &lhs).unwrap(), truth_set(&tm, &rhs).unwrap());
}

#[test]
fn wrong_read_has_a_countermodel() {
    let nats = [1, 2].into_iter().collect();
    let vars = ["i1", "i2", "m"].iter().map(|x| x.to_string()).collect();
    let sig = parse_signature(&memory_msig(&nats, &vars)).unwrap();
    let phi = parse_formula(&sig, "set(set(set(mem, i2, 2), i1, 1), m, 1) -> get(m, 2)").unwrap();
    let cm = find_countermodel(std::sync::Arc::new(sig.clone()), &phi, 1).unwrap();
    assert!(cm.is_some());
    // and in the intended memory model, at the memory it describes
    let mut model = all_memories_model();
    // mem_0 is the empty memory
    model.set_valuation("mem", &[0]).unwrap();
    let phi = parse_formula(model.signature(), "set(set(set(mem, i2, 2), i1, 1), m, 1) -> get(m, 2)").unwrap();
    assert!(failing_world(&model, &phi).unwrap().is_some());
    let good = parse_formula(model.signature(), "set(set(set(mem, i2, 2), i1, 1), m, 1) -> get(m, 1)").unwrap();
    assert!(globally_true(&model, &good).unwrap());
}

#[test]
fn signature_has_the_grammar_sorts() {
    let sig = smc_signature();
    let names: Vec<String> = sig.sorts().map(|s| sig.sort_name(s).to_string()).collect();
    for s in ["Nat", "Var", "Bool", "AExp", "BExp", "Stmt", "Val", "ValStack", "Mem", "CtrlStack", "Config"] {
        assert!(names.iter().any(|n| n == s), "missing sort {s}");
    }
    assert_eq!(sig.num_sorts(), 11);
    for op in ["exec", "choice", "seq", "star", "test", "config", "set", "get", "empty", "nil", "cons"] {
        assert!(sig.op(op).is_some(), "missing op {op}");
    }
    let fixture = include_str!("../fixtures/smc.msig");
    assert_eq!(parse_signature(fixture).unwrap(), sig);
}
