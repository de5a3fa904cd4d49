use rand::seq::SliceRandom;
use rand::Rng;

use super::{Formula, Signature, SortId};

/// Shape limits for [`random_signature`].
#[derive(Debug, Clone, Copy)]
pub struct SigShape {
    pub max_sorts: usize,
    pub max_ops: usize,
    pub max_arity: usize,
    pub vars_per_sort: usize,
}

impl Default for SigShape {
    fn default() -> Self {
        SigShape {
            max_sorts: 3,
            max_ops: 4,
            max_arity: 2,
            vars_per_sort: 2,
        }
    }
}

/// A random signature with sorts `s0, s1, …`, operations `f0, f1, …` (at least one
/// of positive arity) and variables `p0_0, p0_1, …` (variable `j` of sort `i` is `p<i>_<j>`).
pub fn random_signature<R: Rng + ?Sized>(shape: SigShape, rng: &mut R) -> Signature {
    let n_sorts = rng.gen_range(1..=shape.max_sorts.max(1));
    let n_ops = rng.gen_range(1..=shape.max_ops.max(1));
    let mut b = Signature::builder();
    let sorts: Vec<String> = (0..n_sorts).map(|i| format!("s{i}")).collect();
    for s in &sorts {
        b.sort(s).expect("fresh sort");
    }
    for i in 0..n_ops {
        let lo = usize::from(i == 0 && shape.max_arity > 0);
        let arity = rng.gen_range(lo..=shape.max_arity);
        let args: Vec<&str> = (0..arity).map(|_| sorts.choose(rng).expect("sorts").as_str()).collect();
        let result = sorts.choose(rng).expect("sorts");
        b.op(&format!("f{i}"), &args, result).expect("fresh op");
    }
    for (i, s) in sorts.iter().enumerate() {
        for j in 0..shape.vars_per_sort.max(1) {
            b.var(&format!("p{i}_{j}"), s).expect("fresh var");
        }
    }
    b.finish().expect("well-formed random signature")
}

/// A random well-sorted formula of sort `s` with at most `depth` nested connectives
/// (counting `∧`, `→` and duals as one each), built from variables, nullary
/// operations, `¬`, `∨`, `∧`, `→`, applications and duals.
pub fn random_formula<R: Rng + ?Sized>(sig: &Signature, s: SortId, depth: usize, rng: &mut R) -> Formula {
    let ops: Vec<_> = sig
        .ops()
        .map(|o| sig.op_decl(o))
        .filter(|d| d.result_sort == s)
        .collect();
    let leaf = |rng: &mut R| {
        let nullary: Vec<_> = ops.iter().filter(|d| d.arity() == 0).collect();
        if !nullary.is_empty() && rng.gen_bool(0.2) {
            Formula::constant(&nullary.choose(rng).expect("nonempty").name)
        } else {
            Formula::var(sig.vars_of(s).choose(rng).expect("every sort has variables"))
        }
    };
    if depth <= 1 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    let sub = |rng: &mut R, t: SortId| random_formula(sig, t, depth - 1, rng);
    match rng.gen_range(0..6) {
        0 => sub(rng, s).not(),
        1 => sub(rng, s).or(sub(rng, s)),
        2 => sub(rng, s).and(sub(rng, s)),
        3 => sub(rng, s).implies(sub(rng, s)),
        k => {
            let candidates: Vec<_> = ops.iter().filter(|d| d.arity() > 0).collect();
            match candidates.choose(rng) {
                None => sub(rng, s).not(),
                Some(d) => {
                    let args: Vec<Formula> = d.arg_sorts.iter().map(|t| sub(rng, *t)).collect();
                    if k == 4 {
                        Formula::app(&d.name, args)
                    } else {
                        Formula::dual(&d.name, args)
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn random_formulas_are_well_sorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let sig = random_signature(SigShape::default(), &mut rng);
            for s in sig.sorts().collect::<Vec<_>>() {
                let f = random_formula(&sig, s, 5, &mut rng);
                assert_eq!(sig.sort_of(&f).unwrap(), s);
            }
        }
    }
}
