use rand::seq::SliceRandom;
use rand::Rng;

use super::builder::ProofBuilder;
use super::check::{insert_at, Justification, Proof};
use super::scheme::{k_binding, side_binding};
use crate::syntax::{random_formula, Formula, Signature, SortId};

/// Limits for [`random_global_proof`].
#[derive(Debug, Clone, Copy)]
pub struct ProofShape {
    /// Number of generation attempts; the result usually has fewer steps.
    pub attempts: usize,
    /// Longest chain of rule applications (MP/UG) from an axiom or hypothesis.
    pub max_depth: usize,
    /// Nesting bound for freshly generated subformulas.
    pub leaf_depth: usize,
}

impl Default for ProofShape {
    fn default() -> Self {
        ProofShape {
            attempts: 32,
            max_depth: 6,
            leaf_depth: 2,
        }
    }
}

// steps larger than this are not copied into new formulas, which keeps sizes from
// doubling with every weakening or conjunction
const REUSE_SIZE: usize = 40;

struct Gen<'a, 'r, R: Rng + ?Sized> {
    b: ProofBuilder<'a>,
    depth: Vec<usize>,
    /// Sort and size of each step, cached since formulas grow large.
    sorts: Vec<SortId>,
    sizes: Vec<usize>,
    shape: ProofShape,
    rng: &'r mut R,
}

impl<'a, 'r, R: Rng + ?Sized> Gen<'a, 'r, R> {
    fn sig(&self) -> &'a Signature {
        self.b.sig()
    }

    fn record(&mut self, step: usize, depth: usize) {
        if step > self.depth.len() {
            self.depth.push(depth);
            let s = self.sort(self.b.formula(step));
            self.sorts.push(s);
            self.sizes.push(self.b.formula(step).size());
        }
    }

    fn fresh(&mut self, s: SortId) -> Formula {
        let d = self.rng.gen_range(1..=self.shape.leaf_depth.max(1));
        random_formula(self.sig(), s, d, self.rng)
    }

    fn sort(&self, f: &Formula) -> SortId {
        self.sig().sort_of(f).expect("generated formulas are well-sorted")
    }

    /// A random step small enough to reuse.
    fn small_step(&mut self) -> Option<usize> {
        let small: Vec<usize> = (1..=self.b.len()).filter(|i| self.sizes[i - 1] <= REUSE_SIZE).collect();
        small.choose(self.rng).copied()
    }

    /// An earlier step's formula of sort `s`, or a fresh one.
    fn operand(&mut self, s: SortId) -> Formula {
        let same: Vec<usize> = (1..=self.b.len())
            .filter(|i| self.sorts[i - 1] == s && self.sizes[i - 1] <= REUSE_SIZE)
            .collect();
        match same.choose(self.rng) {
            Some(i) if self.rng.gen_bool(0.6) => self.b.formula(*i).clone(),
            _ => self.fresh(s),
        }
    }

    fn random_sort(&mut self) -> SortId {
        let sorts: Vec<SortId> = self.sig().sorts().collect();
        *sorts.choose(self.rng).expect("signatures have sorts")
    }

    fn taut(&mut self) {
        let s = match self.b.len() {
            0 => self.random_sort(),
            n => {
                let i = self.rng.gen_range(1..=n);
                self.sorts[i - 1]
            }
        };
        let a = self.operand(s);
        let c = self.operand(s);
        let f = match self.rng.gen_range(0..5) {
            0 => a.clone().implies(c.implies(a)),
            1 => a.clone().implies(a.or(c)),
            2 => {
                let bb = self.operand(s);
                a.clone().implies(bb.clone().implies(a.and(bb)))
            }
            3 => {
                let bb = self.operand(s);
                a.clone()
                    .implies(bb.clone())
                    .implies(bb.implies(c.clone()).implies(a.implies(c)))
            }
            _ => c.clone().or(c.not()),
        };
        let i = self.b.taut(f).expect("template is a tautology");
        self.record(i, 0);
    }

    fn hyp(&mut self, hyps: &[Formula]) {
        if let Some(h) = hyps.choose(self.rng) {
            let i = self.b.hyp(h.clone());
            self.record(i, 0);
        }
    }

    /// A modal operation with an argument position of sort `s`, as `(name, arg sorts, pos)`.
    fn modal_slot(&mut self, s: Option<SortId>) -> Option<(String, Vec<SortId>, usize)> {
        let sig = self.sig();
        let slots: Vec<(String, Vec<SortId>, usize)> = sig
            .ops()
            .map(|o| sig.op_decl(o))
            .flat_map(|d| {
                d.arg_sorts
                    .iter()
                    .enumerate()
                    .filter(move |(_, t)| s.is_none_or(|s| **t == s))
                    .map(move |(i, _)| (d.name.to_string(), d.arg_sorts.clone(), i + 1))
            })
            .collect();
        slots.choose(self.rng).cloned()
    }

    fn sides(&mut self, arg_sorts: &[SortId], pos: usize) -> Vec<Formula> {
        arg_sorts
            .iter()
            .enumerate()
            .filter(|(j, _)| j + 1 != pos)
            .map(|(_, t)| self.operand(*t))
            .collect()
    }

    fn k(&mut self) {
        // prefer a boxed implication already proved, so that MP can fire on the instance
        let boxed: Vec<(usize, String, usize, Vec<Formula>, Formula, Formula)> = (1..=self.b.len())
            .filter_map(|i| {
                let (op, args) = self.b.formula(i).as_dual()?;
                args.iter().enumerate().find_map(|(j, a)| {
                    let (phi, chi) = a.as_implication()?;
                    let sides = args
                        .iter()
                        .enumerate()
                        .filter(|(l, _)| *l != j)
                        .map(|(_, f)| (*f).clone())
                        .collect();
                    Some((i, op.to_string(), j + 1, sides, phi.clone(), chi.clone()))
                })
            })
            .collect();
        let pick = match boxed.choose(self.rng) {
            Some(x) if self.rng.gen_bool(0.7) => Some(x.clone()),
            _ => None,
        };
        let (source, op, pos, sides, phi, chi) = match pick {
            Some((i, op, pos, sides, phi, chi)) => (Some(i), op, pos, sides, phi, chi),
            None => {
                let Some((op, arg_sorts, pos)) = self.modal_slot(None) else {
                    return;
                };
                let sides = self.sides(&arg_sorts, pos);
                let t = arg_sorts[pos - 1];
                let phi = self.operand(t);
                let chi = self.operand(t);
                (None, op, pos, sides, phi, chi)
            }
        };
        let i = self
            .b
            .k(&op, pos, k_binding(&sides, pos, phi.clone(), chi))
            .expect("K instance is well-sorted");
        self.record(i, 0);
        if let Some(j) = source {
            if let Some(m) = self.try_mp(j, i) {
                let boxed_phi = Formula::dual(&op, insert_at(&sides, pos, phi));
                if let Some(l) = self.b.find(&boxed_phi) {
                    self.try_mp(l, m);
                }
            }
        }
    }

    /// Modus ponens from steps `j` and `k` if it applies within the depth bound.
    fn try_mp(&mut self, j: usize, k: usize) -> Option<usize> {
        let (ante, _) = self.b.formula(k).as_implication()?;
        let d = self.depth[j - 1].max(self.depth[k - 1]) + 1;
        if ante != self.b.formula(j) || d > self.shape.max_depth {
            return None;
        }
        let i = self.b.mp(j, k).expect("antecedent matches");
        self.record(i, d);
        Some(i)
    }

    /// Weakens a proved step: `A ⊢ C → A` or `A ⊢ A ∨ C`.
    fn weaken(&mut self) {
        let Some(j) = self.small_step() else {
            return;
        };
        let a = self.b.formula(j).clone();
        let s = self.sorts[j - 1];
        let c = self.operand(s);
        let t = if self.rng.gen_bool(0.6) {
            a.clone().implies(c.implies(a))
        } else {
            a.clone().implies(a.or(c))
        };
        let k = self.b.taut(t).expect("weakening is a tautology");
        self.record(k, 0);
        self.try_mp(j, k);
    }

    /// Conjoins two proved steps of the same sort.
    fn conjoin(&mut self) {
        let n = self.b.len();
        if n == 0 {
            return;
        }
        let j = self.rng.gen_range(1..=n);
        let s = self.sort(self.b.formula(j));
        let same: Vec<usize> = (1..=n).filter(|i| self.sorts[i - 1] == s).collect();
        let k = *same.choose(self.rng).expect("j itself");
        let (a, bb) = (self.b.formula(j).clone(), self.b.formula(k).clone());
        let t = self
            .b
            .taut(a.clone().implies(bb.clone().implies(a.and(bb))))
            .expect("conjunction introduction is a tautology");
        self.record(t, 0);
        if let Some(m) = self.try_mp(j, t) {
            self.try_mp(k, m);
        }
    }

    fn dual(&mut self) {
        let Some((op, arg_sorts, _)) = self.modal_slot(None) else {
            return;
        };
        let args: Vec<Formula> = arg_sorts.iter().map(|t| self.operand(*t)).collect();
        let i = self.b.dual(&op, side_binding(&args, 0)).expect("Dual instance is well-sorted");
        self.record(i, 0);
    }

    fn mp(&mut self) {
        let n = self.b.len();
        let mut pairs = Vec::new();
        for k in 1..=n {
            if let Some((ante, _)) = self.b.formula(k).as_implication() {
                for j in 1..=n {
                    if self.b.formula(j) == ante {
                        pairs.push((j, k));
                    }
                }
            }
        }
        pairs.retain(|(j, k)| self.depth[j - 1].max(self.depth[k - 1]) < self.shape.max_depth);
        if let Some(&(j, k)) = pairs.choose(self.rng) {
            let d = self.depth[j - 1].max(self.depth[k - 1]) + 1;
            let i = self.b.mp(j, k).expect("antecedent matches");
            self.record(i, d);
        }
    }

    fn ug(&mut self) {
        let n = self.b.len();
        let ready: Vec<usize> = (1..=n).filter(|i| self.depth[i - 1] < self.shape.max_depth).collect();
        let Some(&j) = ready.choose(self.rng) else {
            return;
        };
        let s = self.sorts[j - 1];
        let Some((op, arg_sorts, pos)) = self.modal_slot(Some(s)) else {
            return;
        };
        let sides = self.sides(&arg_sorts, pos);
        let d = self.depth[j - 1] + 1;
        let i = self.b.ug(&op, pos, j, &sides).expect("UG is well-sorted");
        self.record(i, d);
    }
}

/// A random global proof from `hyps` in the standard basis, mixing tautologies,
/// `K` and `Dual` instances, hypotheses, MP and UG. The conclusion is the step with
/// the largest derivation; steps it does not depend on are dropped.
pub fn random_global_proof<R: Rng + ?Sized>(
    sig: &Signature,
    hyps: &[Formula],
    shape: ProofShape,
    rng: &mut R,
) -> Proof {
    let mut g = Gen {
        b: ProofBuilder::new(sig),
        depth: Vec::new(),
        sorts: Vec::new(),
        sizes: Vec::new(),
        shape,
        rng,
    };
    for _ in 0..shape.attempts {
        let roll = g.rng.gen_range(0..100);
        match roll {
            0..=14 if !hyps.is_empty() => g.hyp(hyps),
            0..=24 => g.taut(),
            25..=44 => g.weaken(),
            45..=54 => g.conjoin(),
            55..=69 => g.k(),
            70..=74 => g.dual(),
            75..=84 => g.mp(),
            _ => g.ug(),
        }
        if g.b.is_empty() {
            g.taut();
        }
    }
    // conclude at the step with the largest derivation, favouring hypotheses and UG
    let steps = g.b.steps();
    let mut ancestors: Vec<Vec<bool>> = Vec::with_capacity(steps.len());
    let mut score = Vec::with_capacity(steps.len());
    for (i, st) in steps.iter().enumerate() {
        let mut mine = vec![false; steps.len()];
        mine[i] = true;
        for p in st.just.premises() {
            for (m, a) in mine.iter_mut().zip(&ancestors[p - 1]) {
                *m |= *a;
            }
        }
        let size = mine.iter().filter(|x| **x).count();
        let count = |pred: &dyn Fn(&Justification) -> bool| {
            mine.iter().zip(steps).filter(|(m, s)| **m && pred(&s.just)).count()
        };
        let hyp_uses = count(&|j| *j == Justification::Hyp);
        let ug_uses = count(&|j| matches!(j, Justification::Ug { .. }));
        score.push(size + 3 * hyp_uses.min(2) + 2 * ug_uses.min(3));
        ancestors.push(mine);
    }
    let best = score.iter().copied().max().unwrap_or(0);
    let candidates: Vec<usize> = (1..=steps.len()).filter(|i| score[i - 1] == best).collect();
    let last = *candidates.choose(g.rng).expect("at least one step");
    g.b.finish_global(hyps.to_vec(), last)
}
