use std::sync::Arc;

use msml::proof::*;
use msml::semantics::{enumerate_models, globally_true, random_model};
use msml::syntax::{parse_formula, parse_signature, random_formula, random_signature, SigShape};
use msml::{Formula, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sig() -> Signature {
    parse_signature(
        "sort s\nsort t\nop f : s -> s\nop g : s s -> s\nop h : t -> s\nvar p : s\nvar q : s\nvar r : s\nvar u : t\n",
    )
    .unwrap()
}

fn f(sig: &Signature, t: &str) -> Formula {
    parse_formula(sig, t).unwrap()
}

fn standard() -> AxiomSet {
    AxiomSet::new(Basis::Standard)
}

fn no_files(_: &str) -> msml::Result<String> {
    Err(msml::Error::Proof("no files".into()))
}

fn accepted(sig: &Signature, proof: &Proof) -> Formula {
    match check_proof(sig, &standard(), proof) {
        Verdict::Accepted { conclusion } => conclusion,
        v => panic!("{v}\n{}", write_proof(sig, proof)),
    }
}

#[test]
fn ug_on_a_tautology() {
    let sig = sig();
    let text = "mode global\n1. p -> p ; taut\n2. [f](p -> p) ; ug f 1 1 []\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    assert_eq!(accepted(&sig, &proof), f(&sig, "[f](p -> p)"));
}

#[test]
fn ug_with_side_formulas() {
    let sig = sig();
    let text = "mode global\n1. p -> p ; taut\n2. [g](q, p -> p) ; ug g 2 1 [q]\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    assert_eq!(accepted(&sig, &proof), f(&sig, "[g](q, p -> p)"));
}

#[test]
fn bad_steps_are_rejected_with_their_index() {
    let sig = sig();
    let cases = [
        ("mode global\n1. p -> p ; taut\n2. q ; mp 1 1\n", 2),
        ("mode global\n1. p ; taut\n", 1),
        ("mode global\n1. p -> p ; taut\n2. p ; mp 1 3\n", 2),
        ("mode global\n1. p ; hyp\n", 1),
        ("mode global\n1. p -> p ; taut\n2. [f](q -> q) ; ug f 1 1 []\n", 2),
        ("mode global\n1. p -> p ; taut\n2. f(p) -> f(p) ; mono f 1 1 []\n", 2),
    ];
    for (text, at) in cases {
        let proof = parse_proof(&sig, text, &no_files).unwrap();
        match check_proof(&sig, &standard(), &proof) {
            Verdict::Rejected { step, .. } => assert_eq!(step, Some(at), "{text}"),
            v => panic!("accepted {text}: {v}"),
        }
    }
}

#[test]
fn hypotheses_in_both_modes() {
    let sig = sig();
    let global = "mode global\nhyp p\nhyp p -> q\n1. p ; hyp\n2. p -> q ; hyp\n3. q ; mp 1 2\n";
    assert_eq!(accepted(&sig, &parse_proof(&sig, global, &no_files).unwrap()), f(&sig, "q"));
    let local = "mode local s witnesses 1 2\nhyp p\nhyp p -> q\n1. p & (p -> q) -> q ; taut\n";
    assert_eq!(accepted(&sig, &parse_proof(&sig, local, &no_files).unwrap()), f(&sig, "q"));
    let local_hyp = "mode local s witnesses 1\nhyp p\n1. p ; hyp\n";
    assert!(!check_proof(&sig, &standard(), &parse_proof(&sig, local_hyp, &no_files).unwrap()).is_accepted());
    let wrong_shape = "mode local s witnesses 1\nhyp p\n1. q -> q ; taut\n";
    let v = check_proof(&sig, &standard(), &parse_proof(&sig, wrong_shape, &no_files).unwrap());
    assert!(matches!(v, Verdict::Rejected { step: None, .. }));
    let goal = "mode global\ngoal q -> q\n1. p -> p ; taut\n";
    assert!(!check_proof(&sig, &standard(), &parse_proof(&sig, goal, &no_files).unwrap()).is_accepted());
}

#[test]
fn hypothesis_files_are_loaded() {
    let sig = sig();
    let text = "mode global hyps H.mfm\n1. p ; hyp\n";
    let load = |name: &str| -> msml::Result<String> {
        assert_eq!(name, "H.mfm");
        Ok("p\n# comment\nq\n".into())
    };
    let proof = parse_proof(&sig, text, &load).unwrap();
    assert_eq!(proof.mode, Mode::Global { hyps: vec![f(&sig, "p"), f(&sig, "q")] });
    accepted(&sig, &proof);
}

#[test]
fn k_and_dual_instances_check() {
    let sig = sig();
    let text = "mode global\n\
        1. [f](p -> q) -> [f](p) -> [f](q) ; k f 1 {PHI := p, CHI := q}\n\
        2. g(p, q) <-> ![g](!p, !q) ; dual g {PSI1 := p, PSI2 := q}\n\
        3. [g](r, p -> q) -> [g](r, p) -> [g](r, q) ; k g 2 {PSI1 := r, PHI := p, CHI := q}\n";
    accepted(&sig, &parse_proof(&sig, text, &no_files).unwrap());
    let alt = AxiomSet::new(Basis::Alternative);
    let v = check_proof(&sig, &alt, &parse_proof(&sig, text, &no_files).unwrap());
    assert!(matches!(v, Verdict::Rejected { step: Some(1), .. }));
}

#[test]
fn alternative_basis() {
    let sig = sig();
    let text = "mode global\n\
        1. g(bot@s, q) <-> bot@s ; norm g 1 {PSI1 := bot@s, PSI2 := q}\n\
        2. f(p | q) <-> f(p) | f(q) ; add f 1 {PHI := p, CHI := q}\n\
        3. p -> p | q ; taut\n\
        4. f(p) -> f(p | q) ; mono f 1 3 []\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    let alt = AxiomSet::new(Basis::Alternative);
    assert!(check_proof(&sig, &alt, &proof).is_accepted());
    assert!(!check_proof(&sig, &standard(), &proof).is_accepted());
    let bad_norm = "mode global\n1. g(p, q) <-> bot@s ; norm g 1 {PSI1 := p, PSI2 := q}\n";
    let v = check_proof(&sig, &alt, &parse_proof(&sig, bad_norm, &no_files).unwrap());
    assert!(!v.is_accepted());
}

#[test]
fn mpf_round_trip() {
    let sig = sig();
    let text = "mode local s witnesses 1\nhyp p\ngoal q -> p\n\
        1. p -> q -> p ; taut\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    let again = parse_proof(&sig, &write_proof(&sig, &proof), &no_files).unwrap();
    assert_eq!(again, proof);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let p = random_global_proof(&sig, &[f(&sig, "p"), f(&sig, "u")], ProofShape::default(), &mut rng);
        let again = parse_proof(&sig, &write_proof(&sig, &p), &no_files).unwrap();
        assert_eq!(again, p);
    }
}

#[test]
fn derived_theorems() {
    let sig = sig();
    let (p, q) = (f(&sig, "p"), f(&sig, "q"));
    let bc = derive_box_conj(&sig, "f", 1, &[], &p, &q).unwrap();
    assert_eq!(accepted(&sig, &bc), f(&sig, "[f](p & q) <-> [f](p) & [f](q)"));
    let dd = derive_dia_disj(&sig, "f", 1, &[], &p, &q).unwrap();
    assert_eq!(accepted(&sig, &dd), f(&sig, "f(p | q) <-> f(p) | f(q)"));
    let refl = taut_proof(&sig, f(&sig, "p -> p")).unwrap();
    let mono = derive_mono(&sig, "f", 1, &[], &refl).unwrap();
    assert_eq!(accepted(&sig, &mono), f(&sig, "[f](p) -> [f](p)"));
    let r = f(&sig, "r");
    let bc2 = derive_box_conj(&sig, "g", 2, std::slice::from_ref(&r), &p, &q).unwrap();
    assert_eq!(accepted(&sig, &bc2), f(&sig, "[g](r, p & q) <-> [g](r, p) & [g](r, q)"));
    let dd1 = derive_dia_disj(&sig, "g", 1, std::slice::from_ref(&r), &p, &q).unwrap();
    assert_eq!(accepted(&sig, &dd1), f(&sig, "g(p | q, r) <-> g(p, r) | g(q, r)"));
    let eq = taut_proof(&sig, f(&sig, "p & q <-> q & p")).unwrap();
    let c = derive_cong(&sig, "g", 1, &[r], &eq).unwrap();
    assert_eq!(accepted(&sig, &c), f(&sig, "g(p & q, r) <-> g(q & p, r)"));
    let not_theorem = parse_proof(&sig, "mode global\nhyp p -> q\n1. p -> q ; hyp\n", &no_files).unwrap();
    assert!(derive_mono(&sig, "f", 1, &[], &not_theorem).is_err());
    assert!(derive_box_conj(&sig, "h", 1, &[], &p, &q).is_err());
}

#[test]
fn derived_add_matches_the_alternative_axiom() {
    let sig = sig();
    let (p, q) = (f(&sig, "p"), f(&sig, "q"));
    let add = add_instance(&sig, "f", 1, &binding([("PHI", p.clone()), ("CHI", q.clone())])).unwrap();
    let dd = derive_dia_disj(&sig, "f", 1, &[], &p, &q).unwrap();
    assert_eq!(accepted(&sig, &dd), add);
}

#[test]
fn gamma_closure_levels() {
    let sig = parse_signature("sort s\nop f : s -> s\nop g : s s -> s\nvar c : s\nvar p : s\n").unwrap();
    let gamma = [f(&sig, "p")];
    let top = [f(&sig, "top@s")];
    assert_eq!(gamma_closure(&sig, &gamma, 0, &top).unwrap(), gamma.to_vec());
    let one = gamma_closure(&sig, &gamma, 1, &top).unwrap();
    let expected = ["p", "[f](p)", "[g](p, top@s)", "[g](top@s, p)"].map(|t| f(&sig, t));
    assert_eq!(one, expected.to_vec());
    let two = gamma_closure(&sig, &gamma, 2, &top).unwrap();
    assert!(one.iter().all(|x| two.contains(x)));
    assert!(two.contains(&f(&sig, "[f]([g](top@s, p))")));
    let unary = parse_signature("sort s\nop f : s -> s\nvar p : s\n").unwrap();
    let u = gamma_closure(&unary, &[f(&unary, "p")], 1, &[]).unwrap();
    assert_eq!(u, vec![f(&unary, "p"), f(&unary, "[f](p)")]);
    assert!(gamma_closure(&sig, &gamma, 1, &[]).is_err());
}

#[test]
fn local_deduction_examples() {
    let sig = sig();
    let ax = standard();
    // Φ = ∅, {φ} ⊢ ψ with witness φ
    let text = "mode local s witnesses 1\nhyp p\n1. p -> p | q ; taut\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    let out = dt_local(&sig, &ax, &proof, &f(&sig, "p")).unwrap();
    assert_eq!(accepted(&sig, &out), f(&sig, "p -> p | q"));
    assert!(out.witness_formulas().is_empty());
    // Φ = {γ}, ψ = γ
    let text = "mode local s witnesses 1 2\nhyp r\nhyp p\n1. r & p -> r ; taut\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    let out = dt_local(&sig, &ax, &proof, &f(&sig, "p")).unwrap();
    assert_eq!(accepted(&sig, &out), f(&sig, "p -> r"));
    assert_eq!(out.witness_formulas(), vec![f(&sig, "r")]);
    let back = dt_local_inverse(&sig, &ax, &out).unwrap();
    assert_eq!(accepted(&sig, &back), f(&sig, "r"));
}

#[test]
fn globalize_single_ug() {
    let sig = sig();
    let text = "mode global\nhyp p\n1. p ; hyp\n2. [f](p) ; ug f 1 1 []\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    let g = globalize(&sig, &standard(), &proof).unwrap();
    assert_eq!(accepted(&sig, &g.proof), f(&sig, "[f](p)"));
    assert_eq!(g.proof.witness_formulas(), vec![f(&sig, "[f](p)")]);
    assert_eq!(g.proof.last_formula(), Some(&f(&sig, "[f](p) -> [f](p)")));
    assert_eq!(g.chains[0].base, f(&sig, "p"));
    assert_eq!(g.chains[0].layers.len(), 1);

    let theorem = "mode global\n1. p -> p ; taut\n2. [f](p -> p) ; ug f 1 1 []\n";
    let proof = parse_proof(&sig, theorem, &no_files).unwrap();
    let g = globalize(&sig, &standard(), &proof).unwrap();
    assert!(g.chains.is_empty());
    assert_eq!(accepted(&sig, &g.proof), f(&sig, "[f](p -> p)"));
}

#[test]
fn global_deduction_examples() {
    let sig = sig();
    let phi = f(&sig, "p");
    let text = "mode global\nhyp p\n1. p ; hyp\n2. [f](p) ; ug f 1 1 []\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    let d = dt_global(&sig, &standard(), &proof, &phi).unwrap();
    assert_eq!(accepted(&sig, &d.proof), f(&sig, "[f](p) -> [f](p)"));
    assert_eq!(d.proof.mode, Mode::Global { hyps: vec![] });
    assert_eq!(d.chains.len(), 1);
    assert_eq!(d.chains[0].formula(), f(&sig, "[f](p)"));

    let unused = "mode global\nhyp p\nhyp q\n1. q ; hyp\n";
    let proof = parse_proof(&sig, unused, &no_files).unwrap();
    let d = dt_global(&sig, &standard(), &proof, &phi).unwrap();
    assert_eq!(accepted(&sig, &d.proof), f(&sig, "top@s -> q"));
    assert!(d.chains.is_empty());
}

#[test]
fn two_witnesses_under_one_box() {
    let sig = sig();
    let text = "mode global\nhyp p\nhyp p -> q\n\
        1. p ; hyp\n2. p -> q ; hyp\n3. q ; mp 1 2\n4. [g](r, q) ; ug g 2 3 [r]\n5. [f]([g](r, q)) ; ug f 1 4 []\n";
    let proof = parse_proof(&sig, text, &no_files).unwrap();
    let g = globalize(&sig, &standard(), &proof).unwrap();
    assert_eq!(accepted(&sig, &g.proof), f(&sig, "[f]([g](r, q))"));
    let gamma = [f(&sig, "p"), f(&sig, "p -> q")];
    for (w, chain) in g.proof.witness_formulas().iter().zip(&g.chains) {
        assert_eq!(&chain.formula(), w);
        assert_eq!(gamma_g_chain(&gamma, w).unwrap().formula(), *w);
        assert_eq!(chain.layers.len(), 2);
    }
    let d = dt_global(&sig, &standard(), &proof, &f(&sig, "p")).unwrap();
    assert_eq!(
        accepted(&sig, &d.proof),
        f(&sig, "[f]([g](r, p)) -> [f]([g](r, q))")
    );
}

/// Model-check oracle: a local proof's conclusion holds wherever its witnesses do.
fn locally_sound(sig: &Arc<Signature>, proof: &Proof, conclusion: &Formula, rng: &mut ChaCha8Rng) {
    let pool: Vec<msml::Sym> = sig.all_vars().map(|(v, _)| v.clone()).collect();
    let imp = Formula::guarded(&proof.witness_formulas(), conclusion.clone());
    for _ in 0..5 {
        let m = random_model(sig.clone(), 3, &pool, 0.4, rng).unwrap();
        assert!(globally_true(&m, &imp).unwrap());
    }
}

#[test]
fn random_proofs_transform_and_recheck() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let ax = standard();
    for _ in 0..50 {
        let sig = Arc::new(random_signature(SigShape::default(), &mut rng));
        let sorts: Vec<_> = sig.sorts().collect();
        let hyps: Vec<Formula> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let s = sorts[rng.gen_range(0..sorts.len())];
                random_formula(&sig, s, 2, &mut rng)
            })
            .collect();
        let proof = random_global_proof(&sig, &hyps, ProofShape::default(), &mut rng);
        let psi = accepted(&sig, &proof);

        let g = globalize(&sig, &ax, &proof).unwrap();
        assert_eq!(accepted(&sig, &g.proof), psi);
        for (w, chain) in g.proof.witness_formulas().iter().zip(&g.chains) {
            assert_eq!(&chain.formula(), w);
            assert!(hyps.contains(&chain.base));
            assert!(gamma_g_chain(&hyps, w).is_some());
        }
        locally_sound(&sig, &g.proof, &psi, &mut rng);

        let phi = &hyps[0];
        let d = dt_global(&sig, &ax, &proof, phi).unwrap();
        let c = accepted(&sig, &d.proof);
        let ws: Vec<Formula> = d.chains.iter().map(|ch| ch.formula()).collect();
        for ch in &d.chains {
            assert_eq!(&ch.base, phi);
            assert!(gamma_g_chain(std::slice::from_ref(phi), &ch.formula()).is_some());
        }
        let want = match Formula::conj(&ws) {
            Some(a) => a.implies(psi.clone()),
            None => sig.mk_top(sig.sort_of(&psi).unwrap()).implies(psi.clone()),
        };
        assert_eq!(c, want);
        assert!(d.proof.used_hyps().iter().all(|h| h != phi));

        if let Some(last_w) = g.proof.witness_formulas().last().cloned() {
            let out = dt_local(&sig, &ax, &g.proof, &last_w).unwrap();
            assert_eq!(accepted(&sig, &out), last_w.clone().implies(psi.clone()));
            let back = dt_local_inverse(&sig, &ax, &out).unwrap();
            assert_eq!(accepted(&sig, &back), psi);
        }
    }
}

#[test]
fn instances_are_valid_on_enumerated_models() {
    let sig = Arc::new(parse_signature("sort s\nop f : s -> s\nvar p : s\nvar q : s\n").unwrap());
    let (p, q) = (f(&sig, "p"), f(&sig, "q"));
    let b = binding([("PHI", p.clone()), ("CHI", q.clone())]);
    let k = k_instance(&sig, "f", 1, &b).unwrap();
    let d = dual_instance(&sig, "f", &binding([("PSI1", p.clone())])).unwrap();
    let add = add_instance(&sig, "f", 1, &b).unwrap();
    let norm = norm_instance(&sig, "f", 1, &binding([("PSI1", sig.mk_bot(sig.sort("s").unwrap()))])).unwrap();
    let pool = [msml::Sym::from("p"), msml::Sym::from("q")];
    for m in enumerate_models(sig.clone(), 2, &pool).unwrap() {
        for x in [&k, &d, &add, &norm] {
            assert!(globally_true(&m, x).unwrap());
        }
    }
}

#[test]
fn checking_is_deterministic() {
    let sig = sig();
    let text = "mode global\n1. p -> p ; taut\n2. q ; mp 1 1\n";
    let a = check_proof(&sig, &standard(), &parse_proof(&sig, text, &no_files).unwrap());
    let b = check_proof(&sig, &standard(), &parse_proof(&sig, text, &no_files).unwrap());
    assert_eq!(a, b);
}
