use std::collections::HashMap;

use super::check::{insert_at, Justification, Mode, Proof, ProofStep};
use super::scheme::{
    add_instance, dual_instance, k_instance, norm_instance, AxiomSet, Binding,
};
use super::taut::taut_check;
use crate::error::{Error, Result};
use crate::syntax::{print_formula, Formula, Signature, SortId, Sym};

/// Incremental construction of proofs. Every method validates the step it adds
/// and returns its 1-based number; a formula that is already proved is not
/// proved again.
#[derive(Debug)]
pub struct ProofBuilder<'a> {
    sig: &'a Signature,
    axioms: Option<&'a AxiomSet>,
    steps: Vec<ProofStep>,
    index: HashMap<Formula, usize>,
}

impl<'a> ProofBuilder<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        ProofBuilder {
            sig,
            axioms: None,
            steps: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn with_axioms(sig: &'a Signature, axioms: &'a AxiomSet) -> Self {
        ProofBuilder {
            axioms: Some(axioms),
            ..ProofBuilder::new(sig)
        }
    }

    pub fn sig(&self) -> &'a Signature {
        self.sig
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Formula proved at step `i`.
    pub fn formula(&self, i: usize) -> &Formula {
        &self.steps[i - 1].formula
    }

    /// Step number of `f` if it has already been proved.
    pub fn find(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        if let Some(&i) = self.index.get(&formula) {
            return i;
        }
        self.steps.push(ProofStep {
            formula: formula.clone(),
            just,
        });
        let i = self.steps.len();
        self.index.insert(formula, i);
        i
    }

    pub fn taut(&mut self, f: Formula) -> Result<usize> {
        if let Some(i) = self.find(&f) {
            return Ok(i);
        }
        if !taut_check(self.sig, &f)? {
            return Err(Error::Proof(format!(
                "`{}` is not a tautology",
                print_formula(self.sig, &f)
            )));
        }
        Ok(self.push(f, Justification::Taut))
    }

    pub fn hyp(&mut self, f: Formula) -> usize {
        self.push(f, Justification::Hyp)
    }

    /// Modus ponens: `minor` proves `φ`, `major` proves `φ → ψ`; returns the step of `ψ`.
    pub fn mp(&mut self, minor: usize, major: usize) -> Result<usize> {
        let a = self.formula(minor).clone();
        let (ante, cons) = self
            .formula(major)
            .as_implication()
            .map(|(x, y)| (x.clone(), y.clone()))
            .ok_or_else(|| Error::Proof(format!("step {major} is not an implication")))?;
        if ante != a {
            return Err(Error::Proof(format!(
                "modus ponens: `{}` does not match the antecedent `{}`",
                print_formula(self.sig, &a),
                print_formula(self.sig, &ante)
            )));
        }
        Ok(self.push(cons, Justification::Mp { minor, major }))
    }

    pub fn ug(&mut self, op: &str, pos: usize, premise: usize, sides: &[Formula]) -> Result<usize> {
        let args = insert_at(sides, pos, self.formula(premise).clone());
        let f = self.sig.mk_dual(op, args)?;
        Ok(self.push(
            f,
            Justification::Ug {
                op: Sym::from(op),
                pos,
                premise,
                sides: sides.to_vec(),
            },
        ))
    }

    pub fn mono(&mut self, op: &str, pos: usize, premise: usize, sides: &[Formula]) -> Result<usize> {
        let (a, b) = self
            .formula(premise)
            .as_implication()
            .map(|(x, y)| (x.clone(), y.clone()))
            .ok_or_else(|| Error::Proof(format!("step {premise} is not an implication")))?;
        let lhs = self.sig.mk_app(op, insert_at(sides, pos, a))?;
        let rhs = self.sig.mk_app(op, insert_at(sides, pos, b))?;
        Ok(self.push(
            lhs.implies(rhs),
            Justification::Mono {
                op: Sym::from(op),
                pos,
                premise,
                sides: sides.to_vec(),
            },
        ))
    }

    pub fn k(&mut self, op: &str, pos: usize, binding: Binding) -> Result<usize> {
        let f = k_instance(self.sig, op, pos, &binding)?;
        Ok(self.push(
            f,
            Justification::K {
                op: Sym::from(op),
                pos,
                binding,
            },
        ))
    }

    pub fn dual(&mut self, op: &str, binding: Binding) -> Result<usize> {
        let f = dual_instance(self.sig, op, &binding)?;
        Ok(self.push(
            f,
            Justification::Dual {
                op: Sym::from(op),
                binding,
            },
        ))
    }

    pub fn norm(&mut self, op: &str, pos: usize, binding: Binding) -> Result<usize> {
        let f = norm_instance(self.sig, op, pos, &binding)?;
        Ok(self.push(
            f,
            Justification::Norm {
                op: Sym::from(op),
                pos,
                binding,
            },
        ))
    }

    pub fn add(&mut self, op: &str, pos: usize, binding: Binding) -> Result<usize> {
        let f = add_instance(self.sig, op, pos, &binding)?;
        Ok(self.push(
            f,
            Justification::Add {
                op: Sym::from(op),
                pos,
                binding,
            },
        ))
    }

    /// Instance of a scheme of the attached axiom set.
    pub fn axiom(&mut self, name: &str, binding: Binding) -> Result<usize> {
        let axioms = self
            .axioms
            .ok_or_else(|| Error::Proof("no axiom set attached to the builder".into()))?;
        let scheme = axioms
            .get(name)
            .ok_or_else(|| Error::Proof(format!("unknown scheme `{name}`")))?;
        let f = scheme.instantiate(self.sig, &binding)?;
        Ok(self.push(
            f,
            Justification::Axiom {
                name: Sym::from(name),
                binding,
            },
        ))
    }

    /// Derives `conclusion` from the given steps by propositional reasoning:
    /// one tautology `p1 → (p2 → … → conclusion)` followed by modus ponens.
    pub fn mp_chain(&mut self, premises: &[usize], conclusion: Formula) -> Result<usize> {
        if let Some(i) = self.find(&conclusion) {
            return Ok(i);
        }
        if premises.is_empty() {
            return self.taut(conclusion);
        }
        let taut = premises
            .iter()
            .rev()
            .fold(conclusion, |acc, p| self.formula(*p).clone().implies(acc));
        let mut cur = self.taut(taut)?;
        for p in premises {
            cur = self.mp(*p, cur)?;
        }
        Ok(cur)
    }

    /// From `φ → ψ` and `ψ → χ`, derives `φ → χ`.
    pub fn tranz(&mut self, first: usize, second: usize) -> Result<usize> {
        let (a, _) = self
            .formula(first)
            .as_implication()
            .map(|(x, y)| (x.clone(), y.clone()))
            .ok_or_else(|| Error::Proof(format!("step {first} is not an implication")))?;
        let (_, c) = self
            .formula(second)
            .as_implication()
            .map(|(x, y)| (x.clone(), y.clone()))
            .ok_or_else(|| Error::Proof(format!("step {second} is not an implication")))?;
        self.mp_chain(&[first, second], a.implies(c))
    }

    /// Appends the steps of another proof, renumbering its references; returns the
    /// step number of its last step.
    pub fn include(&mut self, proof: &Proof) -> Result<usize> {
        let mut map = Vec::with_capacity(proof.steps.len());
        for step in &proof.steps {
            let mut just = step.just.clone();
            for p in just.premises() {
                if p == 0 || p > map.len() {
                    return Err(Error::Proof(format!("included proof cites invalid step {p}")));
                }
            }
            just.renumber(|p| map[p - 1]);
            map.push(self.push(step.formula.clone(), just));
        }
        map.last()
            .copied()
            .ok_or_else(|| Error::Proof("included proof is empty".into()))
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    /// Finishes as a global proof whose last step is `last`; unused steps are dropped.
    pub fn finish_global(self, hyps: Vec<Formula>, last: usize) -> Proof {
        prune(&Proof {
            mode: Mode::Global { hyps },
            steps: self.steps[..last].to_vec(),
            goal: None,
        })
    }

    /// Finishes as a local proof whose last step is `last`; unused steps are dropped.
    pub fn finish_local(self, sort: SortId, hyps: Vec<Formula>, witnesses: Vec<usize>, last: usize) -> Proof {
        prune(&Proof {
            mode: Mode::Local { sort, hyps, witnesses },
            steps: self.steps[..last].to_vec(),
            goal: None,
        })
    }
}

/// Removes the steps the last step does not depend on, renumbering references.
pub fn prune(proof: &Proof) -> Proof {
    let n = proof.steps.len();
    let mut live = vec![false; n];
    if n > 0 {
        live[n - 1] = true;
    }
    for i in (0..n).rev() {
        if live[i] {
            for p in proof.steps[i].just.premises() {
                live[p - 1] = true;
            }
        }
    }
    let mut map = vec![0; n];
    let mut steps = Vec::new();
    for (i, step) in proof.steps.iter().enumerate() {
        if live[i] {
            let mut s = step.clone();
            s.just.renumber(|p| map[p - 1]);
            steps.push(s);
            map[i] = steps.len();
        }
    }
    Proof {
        mode: proof.mode.clone(),
        steps,
        goal: proof.goal.clone(),
    }
}
