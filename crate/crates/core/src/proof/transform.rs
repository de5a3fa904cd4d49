//! Proof transformations: the local deduction theorem, the passage from global to
//! local deduction through `Γ_G`, and the second global deduction theorem.

use std::collections::HashMap;

use super::builder::ProofBuilder;
use super::check::{check_proof, Justification, Mode, Proof, Verdict};
use super::derive::box_conj_intro;
use super::scheme::{k_binding, AxiomSet, Basis};
use crate::error::{Error, Result};
use crate::syntax::{Formula, Signature, SortId, Sym};

/// One `σ□` layer: the operation, the argument position and the other arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub op: Sym,
    pub pos: usize,
    pub sides: Vec<Formula>,
}

impl Layer {
    pub fn wrap(&self, f: Formula) -> Formula {
        let mut args = self.sides.clone();
        args.insert(self.pos - 1, f);
        Formula::dual(&self.op, args)
    }
}

/// Membership certificate for `Γ_G`: a base formula of `Γ` wrapped in `σ□` layers
/// (innermost first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaChain {
    pub base: Formula,
    pub layers: Vec<Layer>,
}

impl GammaChain {
    pub fn formula(&self) -> Formula {
        self.layers.iter().fold(self.base.clone(), |f, l| l.wrap(f))
    }
}

fn require_valid(sig: &Signature, axioms: &AxiomSet, proof: &Proof) -> Result<Formula> {
    match check_proof(sig, axioms, proof) {
        Verdict::Accepted { conclusion } => Ok(conclusion),
        v => Err(Error::Proof(format!("input proof is invalid: {v}"))),
    }
}

fn require_standard(axioms: &AxiomSet) -> Result<()> {
    if axioms.basis != Basis::Standard {
        return Err(Error::Proof("transformations need the standard basis".into()));
    }
    Ok(())
}

/// A local proof after removing or adding one hypothesis.
fn local_parts(proof: &Proof) -> Result<(SortId, Vec<Formula>, Vec<Formula>)> {
    match &proof.mode {
        Mode::Local { sort, hyps, .. } => Ok((*sort, hyps.clone(), proof.witness_formulas())),
        Mode::Global { .. } => Err(Error::Proof("expected a local proof".into())),
    }
}

fn indices(hyps: &[Formula], ws: &[Formula]) -> Vec<usize> {
    ws.iter()
        .map(|w| hyps.iter().position(|h| h == w).expect("witness among hypotheses") + 1)
        .collect()
}

/// Local deduction theorem, left to right: from `Φ ∪ {φ} ⊢_s ψ` to `Φ ⊢_s φ → ψ`.
pub fn dt_local(sig: &Signature, axioms: &AxiomSet, proof: &Proof, phi: &Formula) -> Result<Proof> {
    let psi = require_valid(sig, axioms, proof)?;
    let (sort, hyps, ws) = local_parts(proof)?;
    if sig.sort_of(phi)? != sort {
        return Err(Error::Sort("the discharged hypothesis has the wrong sort".into()));
    }
    let new_hyps: Vec<Formula> = hyps.into_iter().filter(|h| h != phi).collect();
    let new_ws: Vec<Formula> = ws.into_iter().filter(|w| w != phi).collect();
    let mut b = ProofBuilder::with_axioms(sig, axioms);
    let last = b.include(proof)?;
    let goal = Formula::guarded(&new_ws, phi.clone().implies(psi));
    let out = b.mp_chain(&[last], goal)?;
    let witnesses = indices(&new_hyps, &new_ws);
    Ok(b.finish_local(sort, new_hyps, witnesses, out))
}

/// Local deduction theorem, right to left: from `Φ ⊢_s φ → ψ` to `Φ ∪ {φ} ⊢_s ψ`.
pub fn dt_local_inverse(sig: &Signature, axioms: &AxiomSet, proof: &Proof) -> Result<Proof> {
    let conclusion = require_valid(sig, axioms, proof)?;
    let (sort, mut hyps, mut ws) = local_parts(proof)?;
    let (phi, psi) = conclusion
        .as_implication()
        .map(|(a, b)| (a.clone(), b.clone()))
        .ok_or_else(|| Error::Proof("the conclusion is not an implication".into()))?;
    if !hyps.contains(&phi) {
        hyps.push(phi.clone());
    }
    if !ws.contains(&phi) {
        ws.push(phi);
    }
    let mut b = ProofBuilder::with_axioms(sig, axioms);
    let last = b.include(proof)?;
    let out = b.mp_chain(&[last], Formula::guarded(&ws, psi))?;
    let witnesses = indices(&hyps, &ws);
    Ok(b.finish_local(sort, hyps, witnesses, out))
}

struct Lifted {
    /// Step number of `guarded(witnesses, γ)` in the builder.
    step: usize,
    witnesses: Vec<Formula>,
}

/// Replays a global proof, turning every hypothesis step selected by `discharge`
/// into a witness: each step `γ` becomes a derivation of `(w1 ∧ … ∧ wn) → γ` where
/// the `wi` are discharged hypotheses under `σ□` layers.
fn lift<'a>(
    b: &mut ProofBuilder<'a>,
    proof: &Proof,
    discharge: &dyn Fn(&Formula) -> bool,
    chains: &mut HashMap<Formula, GammaChain>,
) -> Result<Lifted> {
    let mut done: Vec<Lifted> = Vec::with_capacity(proof.steps.len());
    for step in &proof.steps {
        let gamma = step.formula.clone();
        let lifted = match &step.just {
            Justification::Hyp if discharge(&gamma) => {
                chains.entry(gamma.clone()).or_insert_with(|| GammaChain {
                    base: gamma.clone(),
                    layers: Vec::new(),
                });
                Lifted {
                    step: b.taut(gamma.clone().implies(gamma.clone()))?,
                    witnesses: vec![gamma],
                }
            }
            Justification::Hyp => Lifted {
                step: b.hyp(gamma),
                witnesses: Vec::new(),
            },
            Justification::Mp { minor, major } => {
                let (j, k) = (&done[minor - 1], &done[major - 1]);
                let mut ws = j.witnesses.clone();
                for w in &k.witnesses {
                    if !ws.contains(w) {
                        ws.push(w.clone());
                    }
                }
                let step = if ws.is_empty() {
                    b.mp(j.step, k.step)?
                } else {
                    b.mp_chain(&[j.step, k.step], Formula::guarded(&ws, gamma))?
                };
                Lifted { step, witnesses: ws }
            }
            Justification::Ug { op, pos, premise, sides } => {
                let j = &done[premise - 1];
                if j.witnesses.is_empty() {
                    Lifted {
                        step: b.ug(op, *pos, j.step, sides)?,
                        witnesses: Vec::new(),
                    }
                } else {
                    let layer = Layer {
                        op: op.clone(),
                        pos: *pos,
                        sides: sides.clone(),
                    };
                    let inner = proof.steps[premise - 1].formula.clone();
                    let c = Formula::conj(&j.witnesses).expect("nonempty");
                    // σ□(…, C → γj, …), then K: σ□(…, C, …) → γ
                    let ug = b.ug(op, *pos, j.step, sides)?;
                    let k = b.k(op, *pos, k_binding(sides, *pos, c, inner))?;
                    let mut cur = b.mp(ug, k)?;
                    let boxed: Vec<Formula> = j.witnesses.iter().map(|w| layer.wrap(w.clone())).collect();
                    for (w, bw) in j.witnesses.iter().zip(&boxed) {
                        let mut chain = chains.get(w).cloned().expect("witnesses carry chains");
                        chain.layers.push(layer.clone());
                        chains.entry(bw.clone()).or_insert(chain);
                    }
                    if j.witnesses.len() > 1 {
                        // σ□(w1) ∧ … ∧ σ□(wm) → σ□(w1 ∧ … ∧ wm), built up one conjunct at a time
                        let mut acc = j.witnesses[0].clone();
                        let mut acc_step: Option<usize> = None;
                        for (m, w) in j.witnesses.iter().enumerate().skip(1) {
                            let intro = box_conj_intro(b, op, *pos, sides, &acc, w)?;
                            let next = acc.clone().and(w.clone());
                            let target = Formula::conj(&boxed[..=m])
                                .expect("nonempty")
                                .implies(layer.wrap(next.clone()));
                            acc_step = Some(match acc_step {
                                None => intro,
                                Some(prev) => b.mp_chain(&[prev, intro], target)?,
                            });
                            acc = next;
                        }
                        let chain = acc_step.expect("at least two witnesses");
                        cur = b.mp_chain(&[chain, cur], Formula::guarded(&boxed, gamma))?;
                    }
                    Lifted {
                        step: cur,
                        witnesses: boxed,
                    }
                }
            }
            Justification::Mono { .. } => {
                return Err(Error::Proof("transformations need the standard basis".into()));
            }
            _ => {
                Lifted {
                    step: b.include(&Proof::global(Vec::new(), vec![step.clone()]))?,
                    witnesses: Vec::new(),
                }
            }
        };
        done.push(lifted);
    }
    done.pop().ok_or_else(|| Error::Proof("the proof has no steps".into()))
}

/// Output of [`globalize`].
#[derive(Debug, Clone)]
pub struct Globalized {
    /// Local proof whose hypotheses are exactly the witnesses.
    pub proof: Proof,
    pub chains: Vec<GammaChain>,
}

/// From a global proof `Γ ⊢ φ` to a local proof `(Γ_G)_s ⊢_s φ`, with the finite set
/// of `Γ_G` members used as witnesses.
pub fn globalize(sig: &Signature, axioms: &AxiomSet, proof: &Proof) -> Result<Globalized> {
    require_standard(axioms)?;
    let phi = require_valid(sig, axioms, proof)?;
    if !matches!(proof.mode, Mode::Global { .. }) {
        return Err(Error::Proof("expected a global proof".into()));
    }
    let sort = sig.sort_of(&phi)?;
    let mut b = ProofBuilder::with_axioms(sig, axioms);
    let mut chains = HashMap::new();
    let top = lift(&mut b, proof, &|_| true, &mut chains)?;
    let ws = top.witnesses;
    let witnesses = (1..=ws.len()).collect();
    let chains = ws.iter().map(|w| chains[w].clone()).collect();
    Ok(Globalized {
        proof: b.finish_local(sort, ws, witnesses, top.step),
        chains,
    })
}

/// Output of [`dt_global`].
#[derive(Debug, Clone)]
pub struct GlobalDeduction {
    /// Global proof from `Γ` of `(φ1 ∧ … ∧ φn) → ψ`, with `⊤_s` standing for the
    /// empty conjunction.
    pub proof: Proof,
    /// Members of `{φ}_G` used as antecedents, with their `σ□` nesting.
    pub chains: Vec<GammaChain>,
}

/// Global deduction theorem: from `Γ ∪ {φ} ⊢ ψ` to `Γ ⊢ (φ1 ∧ … ∧ φn) → ψ` with each
/// `φi ∈ {φ}_G`.
pub fn dt_global(sig: &Signature, axioms: &AxiomSet, proof: &Proof, phi: &Formula) -> Result<GlobalDeduction> {
    require_standard(axioms)?;
    let psi = require_valid(sig, axioms, proof)?;
    let hyps = match &proof.mode {
        Mode::Global { hyps } => hyps.clone(),
        Mode::Local { .. } => return Err(Error::Proof("expected a global proof".into())),
    };
    let gamma: Vec<Formula> = hyps.into_iter().filter(|h| h != phi).collect();
    let mut b = ProofBuilder::with_axioms(sig, axioms);
    let mut chains = HashMap::new();
    let top = lift(&mut b, proof, &|f| f == phi, &mut chains)?;
    let last = if top.witnesses.is_empty() {
        let s = sig.sort_of(&psi)?;
        b.mp_chain(&[top.step], sig.mk_top(s).implies(psi))?
    } else {
        top.step
    };
    let chains = top.witnesses.iter().map(|w| chains[w].clone()).collect();
    Ok(GlobalDeduction {
        proof: b.finish_global(gamma, last),
        chains,
    })
}

/// A `Γ_G` membership certificate for `f`, if one exists: `f ∈ Γ`, or `f` is
/// `σ□(…, g, …)` with `g ∈ Γ_G` at some position.
pub fn gamma_g_chain(gamma: &[Formula], f: &Formula) -> Option<GammaChain> {
    if gamma.contains(f) {
        return Some(GammaChain {
            base: f.clone(),
            layers: Vec::new(),
        });
    }
    let (op, args) = f.as_dual()?;
    for i in 0..args.len() {
        if let Some(mut chain) = gamma_g_chain(gamma, args[i]) {
            let sides = args
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, a)| (*a).clone())
                .collect();
            chain.layers.push(Layer {
                op: op.clone(),
                pos: i + 1,
                sides,
            });
            return Some(chain);
        }
    }
    None
}
