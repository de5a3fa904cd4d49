use std::collections::BTreeMap;

use msml::syntax::*;
use msml::Formula;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_case(seed: u64) -> (Signature, SortId, Formula, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sig = random_signature(SigShape::default(), &mut rng);
    let s = SortId(rng.gen_range(0..sig.num_sorts() as u32));
    let depth = rng.gen_range(0..=6);
    let f = random_formula(&sig, s, depth, &mut rng);
    (sig, s, f, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_the_identity(seed in any::<u64>()) {
        let (sig, s, f, _) = random_case(seed);
        let text = print_formula(&sig, &f);
        let back = parse_formula(&sig, &text).unwrap();
        prop_assert_eq!(&back, &f, "{}", text);
        prop_assert_eq!(sig.sort_of(&back).unwrap(), s);
    }

    #[test]
    fn substitution_preserves_sorts(seed in any::<u64>()) {
        let (sig, s, f, mut rng) = random_case(seed);
        let mut theta = BTreeMap::new();
        for v in f.vars() {
            let vs = sig.var_sort(&v).unwrap();
            let depth = rng.gen_range(0..=3);
            theta.insert(v, random_formula(&sig, vs, depth, &mut rng));
        }
        let g = sig.substitute(&f, &theta).unwrap();
        prop_assert_eq!(sig.sort_of(&g).unwrap(), s);
        // substituting each variable by itself changes nothing
        let id: BTreeMap<_, _> = f.vars().into_iter().map(|v| (v.clone(), Formula::Var(v))).collect();
        prop_assert_eq!(sig.substitute(&f, &id).unwrap(), f);
    }

    #[test]
    fn signatures_print_and_parse_back(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random_signature(SigShape::default(), &mut rng);
        let back = parse_signature(&sig.to_msig()).unwrap();
        prop_assert_eq!(back.to_msig(), sig.to_msig());
    }
}

fn two_sorts() -> Signature {
    parse_signature("sort s\nsort t\nop f : s t -> s\nop c : -> t\nvar p : s\nvar q : t\n").unwrap()
}

#[test]
fn ill_sorted_input_is_rejected() {
    let sig = two_sorts();
    assert!(parse_formula(&sig, "f(p, q)").is_ok());
    assert!(parse_formula(&sig, "f(q, p)").is_err());
    assert!(parse_formula(&sig, "p | q").is_err());
    assert!(parse_formula(&sig, "f(p)").is_err());
    assert!(parse_formula(&sig, "g(p)").is_err());
}

#[test]
fn substitution_rejects_sort_changes() {
    let sig = two_sorts();
    let f = parse_formula(&sig, "f(p, q)").unwrap();
    let theta: BTreeMap<_, _> = [(Sym::from("q"), Formula::var("p"))].into_iter().collect();
    assert!(sig.substitute(&f, &theta).is_err());
}

#[test]
fn derived_connectives_print_as_written() {
    let sig = two_sorts();
    for text in ["p -> f(p, c)", "[f](p, q)", "top@s & !bot@t | p"] {
        let f = parse_formula(&sig, text);
        if let Ok(f) = f {
            assert_eq!(parse_formula(&sig, &print_formula(&sig, &f)).unwrap(), f, "{text}");
        }
    }
    let k = parse_formula(&sig, "[f](p -> p, q)").unwrap();
    assert!(k.as_dual().is_some());
}
