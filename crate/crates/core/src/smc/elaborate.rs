//! Machine-checkable execution proofs `config(vs, mem) → [c(s)] config(vs′, mem′)`.
//!
//! The prover follows the control term: scheme instances for the basic commands,
//! box monotonicity (UG, K and Dual through `exec`'s second argument) with `A;` for
//! sequencing, `A∪` with `A¬?` for the branch that is not taken, `A*` unfolded once
//! per loop iteration, and congruence under `c(·)` for the decomposition schemes.

use std::collections::BTreeSet;

use super::fixture::{
    ctrl_term, nat_term, smc_axioms, smc_axioms_for, smc_signature, smc_signature_with, value_term, BoxReading,
    DEFAULT_NATS, DEFAULT_VARS, PGM_SOURCE,
};
use super::lang::{parse_program, AExp, Stmt};
use super::machine::{explore, Config, Ctrl, Memory, Mode, Value, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::proof::{binding, cong, dia_mono, numeral, AxiomSet, Proof, ProofBuilder};
use crate::syntax::{print_formula, Formula, Signature};

fn bx(p: Formula, g: Formula) -> Formula {
    BoxReading::Pdl.formula(p, g)
}

fn var(name: &str) -> Formula {
    Formula::var(name)
}

fn set(m: Formula, x: &str, n: u64) -> Formula {
    Formula::app("set", [m, Formula::constant(x), nat_term(n)])
}

fn config(stack: Formula, mem: Formula) -> Formula {
    Formula::app("config", [stack, mem])
}

fn cons(v: Formula, s: Formula) -> Formula {
    Formula::app("cons", [v, s])
}

fn vnat(n: u64) -> Formula {
    value_term(&Value::Nat(n))
}

/// A symbolic configuration: concrete values on top of a stack term, and a memory term.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SymConfig {
    stack: Vec<Formula>,
    base: Formula,
    mem: Formula,
}

impl SymConfig {
    fn stack_formula(&self) -> Formula {
        self.stack.iter().rev().fold(self.base.clone(), |acc, v| cons(v.clone(), acc))
    }

    fn formula(&self) -> Formula {
        config(self.stack_formula(), self.mem.clone())
    }

    fn top(&self) -> Result<&Formula> {
        self.stack
            .first()
            .ok_or_else(|| Error::Smc("the proof needs a concrete value on top of the stack".into()))
    }

    fn popped(&self) -> SymConfig {
        SymConfig {
            stack: self.stack[1..].to_vec(),
            ..self.clone()
        }
    }

    fn pushed(&self, v: Formula) -> SymConfig {
        let mut stack = vec![v];
        stack.extend(self.stack.iter().cloned());
        SymConfig { stack, ..self.clone() }
    }
}

fn nat_of(v: &Formula) -> Result<u64> {
    match v {
        Formula::App(op, args) if &**op == "vnat" && args.len() == 1 => {
            numeral(&args[0]).ok_or_else(|| Error::Smc("malformed numeral on the stack".into()))
        }
        _ => Err(Error::Smc("expected a natural on top of the stack".into())),
    }
}

fn split_set(m: &Formula) -> Option<(&Formula, &Formula, &Formula)> {
    match m {
        Formula::App(op, args) if &**op == "set" && args.len() == 3 => Some((&args[0], &args[1], &args[2])),
        _ => None,
    }
}

struct Prover<'a> {
    b: ProofBuilder<'a>,
    budget: usize,
}

impl<'a> Prover<'a> {
    fn axiom(&mut self, name: &str, pairs: Vec<(&str, Formula)>) -> Result<usize> {
        self.b.axiom(name, binding(pairs))
    }

    /// `[p]A → [p]B` from step `imp` proving `A → B`.
    fn box_mono(&mut self, p: &Formula, imp: usize) -> Result<usize> {
        let (a, c) = self
            .b
            .formula(imp)
            .as_implication()
            .map(|(x, y)| (x.clone(), y.clone()))
            .ok_or_else(|| Error::Proof(format!("step {imp} is not an implication")))?;
        let contra = self.b.mp_chain(&[imp], c.clone().not().implies(a.clone().not()))?;
        let dm = dia_mono(&mut self.b, "exec", 2, std::slice::from_ref(p), contra)?;
        self.b.mp_chain(&[dm], bx(p.clone(), a).implies(bx(p.clone(), c)))
    }

    /// `[p′]g → [p]g` from step `eq` proving `p ↔ p′`.
    fn box_cong(&mut self, eq: usize, g: &Formula) -> Result<usize> {
        let (p, p2) = self
            .b
            .formula(eq)
            .as_iff()
            .map(|(x, y)| (x.clone(), y.clone()))
            .ok_or_else(|| Error::Proof(format!("step {eq} is not an equivalence")))?;
        let c = cong(&mut self.b, "exec", 1, &[g.clone().not()], eq)?;
        self.b.mp_chain(&[c], bx(p2, g.clone()).implies(bx(p, g.clone())))
    }

    /// Brings the latest binding of `x` to the outside of a memory term using AMem2
    /// and congruence under `set`. Returns the new term and a step proving the
    /// equivalence, if anything moved.
    fn expose(&mut self, mem: &Formula, x: &Formula) -> Result<(Formula, Option<usize>)> {
        let (m, y, n) = split_set(mem).ok_or_else(|| {
            Error::Smc("the proof can only read variables assigned earlier in the program".into())
        })?;
        if y == x {
            return Ok((mem.clone(), None));
        }
        let (m2, eq) = self.expose(m, x)?;
        let (inner, _, k) = split_set(&m2).expect("exposed terms are set-terms");
        let swapped = Formula::app(
            "set",
            [Formula::app("set", [inner.clone(), y.clone(), n.clone()]), x.clone(), k.clone()],
        );
        let swap = self.axiom(
            "AMem2",
            vec![("M", inner.clone()), ("X", x.clone()), ("N", k.clone()), ("Y", y.clone()), ("N2", n.clone())],
        )?;
        let step = match eq {
            None => swap,
            Some(e) => {
                let c = cong(&mut self.b, "set", 1, &[y.clone(), n.clone()], e)?;
                self.b.mp_chain(&[c, swap], mem.clone().iff(swapped.clone()))?
            }
        };
        Ok((swapped, Some(step)))
    }

    fn blocked(cfg: &SymConfig, ctrl: &Ctrl) -> bool {
        let test = match ctrl {
            Ctrl::Test(v) => v,
            Ctrl::Seq(a, _) => match &**a {
                Ctrl::Test(v) => v,
                _ => return false,
            },
            _ => return false,
        };
        cfg.stack.first().is_some_and(|top| *top != value_term(test))
    }

    /// `cfg → [ctrl]γ` for a control term whose leading test fails at `cfg`.
    fn prove_blocked(&mut self, cfg: &SymConfig, ctrl: &Ctrl, gamma: &Formula) -> Result<usize> {
        let top = cfg.top()?.clone();
        let rest = cfg.popped();
        let antest = |g: Formula, v2: Formula| {
            vec![
                ("V", top.clone()),
                ("V2", v2),
                ("VS", rest.stack_formula()),
                ("M", cfg.mem.clone()),
                ("G", g),
            ]
        };
        match ctrl {
            Ctrl::Test(v) => self.axiom("Antest", antest(gamma.clone(), value_term(v))),
            Ctrl::Seq(a, tail) => {
                let Ctrl::Test(v) = &**a else {
                    return Err(Error::Smc("not a blocked control term".into()));
                };
                let (t, tail) = (ctrl_term(a), ctrl_term(tail));
                let inner = bx(tail.clone(), gamma.clone());
                let a = self.axiom("Antest", antest(inner, value_term(v)))?;
                let aseq = self.axiom("Aseq", vec![("P", t), ("P2", tail), ("G", gamma.clone())])?;
                self.b.mp_chain(&[a, aseq], cfg.formula().implies(bx(ctrl_term(ctrl), gamma.clone())))
            }
            _ => Err(Error::Smc("not a blocked control term".into())),
        }
    }

    /// Proves `cfg → [ctrl] cfg′` and returns `cfg′` with the step.
    fn prove(&mut self, cfg: &SymConfig, ctrl: &Ctrl) -> Result<(SymConfig, usize)> {
        if let Some(e) = ctrl.expansion() {
            let (name, pairs) = decomposition(ctrl);
            let d = self.axiom(name, pairs)?;
            let expect = ctrl_term(ctrl).iff(ctrl_term(&e));
            if *self.b.formula(d) != expect {
                return Err(Error::Smc(format!("`{name}` does not match the interpreter's expansion")));
            }
            let (fin, s) = self.prove(cfg, &e)?;
            let c = self.box_cong(d, &fin.formula())?;
            return Ok((fin, self.b.tranz(s, c)?));
        }
        let here = cfg.formula();
        match ctrl {
            Ctrl::S(Stmt::Skip) => {
                let s = self.axiom("Askip", vec![("G", here)])?;
                Ok((cfg.clone(), s))
            }
            Ctrl::A(AExp::Num(n)) => {
                let s = self.axiom(
                    "Aint",
                    vec![("VS", cfg.stack_formula()), ("M", cfg.mem.clone()), ("N", nat_term(*n))],
                )?;
                Ok((cfg.pushed(vnat(*n)), s))
            }
            Ctrl::A(AExp::Var(x)) => {
                let xf = Formula::constant(x);
                let (mem2, eq) = self.expose(&cfg.mem, &xf)?;
                let (inner, _, k) = split_set(&mem2).expect("exposed terms are set-terms");
                let (inner, k) = (inner.clone(), k.clone());
                let moved = SymConfig { mem: mem2, ..cfg.clone() };
                let s = self.axiom("Aid", vec![("VS", cfg.stack_formula()), ("M", inner), ("X", xf), ("N", k.clone())])?;
                let fin = moved.pushed(Formula::app("vnat", [k]));
                let s = match eq {
                    None => s,
                    Some(e) => {
                        let c = cong(&mut self.b, "config", 2, &[cfg.stack_formula()], e)?;
                        let fwd = self.b.mp_chain(&[c], here.implies(moved.formula()))?;
                        self.b.tranz(fwd, s)?
                    }
                };
                Ok((fin, s))
            }
            Ctrl::Plus => {
                let n2 = nat_of(cfg.top()?)?;
                let rest = cfg.popped();
                let n1 = nat_of(rest.top()?)?;
                let rest = rest.popped();
                let n = n1
                    .checked_add(n2)
                    .ok_or_else(|| Error::Smc(format!("overflow in {n1} + {n2}")))?;
                let s = self.axiom(
                    "Aplus",
                    vec![
                        ("VS", rest.stack_formula()),
                        ("M", cfg.mem.clone()),
                        ("N", nat_term(n)),
                        ("N1", nat_term(n1)),
                        ("N2", nat_term(n2)),
                    ],
                )?;
                Ok((rest.pushed(vnat(n)), s))
            }
            Ctrl::Leq => {
                let n1 = nat_of(cfg.top()?)?;
                let rest = cfg.popped();
                let n2 = nat_of(rest.top()?)?;
                let rest = rest.popped();
                let t = Formula::constant(if n1 <= n2 { "true" } else { "false" });
                let s = self.axiom(
                    "Aleq",
                    vec![
                        ("VS", rest.stack_formula()),
                        ("M", cfg.mem.clone()),
                        ("T", t.clone()),
                        ("N1", nat_term(n1)),
                        ("N2", nat_term(n2)),
                    ],
                )?;
                Ok((rest.pushed(Formula::app("vbool", [t])), s))
            }
            Ctrl::Asgn(x) => {
                let n = nat_of(cfg.top()?)?;
                let rest = cfg.popped();
                let s = self.axiom(
                    "Aasgn",
                    vec![
                        ("N", nat_term(n)),
                        ("VS", rest.stack_formula()),
                        ("M", cfg.mem.clone()),
                        ("X", Formula::constant(x)),
                    ],
                )?;
                let fin = SymConfig {
                    mem: set(cfg.mem.clone(), x, n),
                    ..rest
                };
                Ok((fin, s))
            }
            Ctrl::Test(v) => {
                if *cfg.top()? != value_term(v) {
                    return Err(Error::Smc(format!("execution blocks at `{ctrl}`")));
                }
                let rest = cfg.popped();
                let s = self.axiom(
                    "Atest",
                    vec![("V", value_term(v)), ("VS", rest.stack_formula()), ("M", cfg.mem.clone())],
                )?;
                Ok((rest, s))
            }
            Ctrl::Seq(a, b) => {
                if let Ctrl::Star(body) = &**a {
                    return self.prove_loop(cfg, body, b);
                }
                let (c1, s1) = self.prove(cfg, a)?;
                let (c2, s2) = self.prove(&c1, b)?;
                let (pa, pb, g) = (ctrl_term(a), ctrl_term(b), c2.formula());
                // [a]c1 → [a][b]c2, then [a]c1 → [a;b]c2 by A;
                let m = self.box_mono(&pa, s2)?;
                let aseq = self.axiom("Aseq", vec![("P", pa.clone()), ("P2", pb.clone()), ("G", g.clone())])?;
                let lifted = self.b.mp_chain(
                    &[m, aseq],
                    bx(pa.clone(), c1.formula()).implies(bx(ctrl_term(ctrl), g)),
                )?;
                Ok((c2, self.b.tranz(s1, lifted)?))
            }
            Ctrl::Choice(a, b) => {
                let (dead_a, dead_b) = (Self::blocked(cfg, a), Self::blocked(cfg, b));
                let (fin, sa, sb) = match (dead_a, dead_b) {
                    (false, true) => {
                        let (fin, sa) = self.prove(cfg, a)?;
                        let sb = self.prove_blocked(cfg, b, &fin.formula())?;
                        (fin, sa, sb)
                    }
                    (true, false) => {
                        let (fin, sb) = self.prove(cfg, b)?;
                        let sa = self.prove_blocked(cfg, a, &fin.formula())?;
                        (fin, sa, sb)
                    }
                    (false, false) => {
                        let (fin, sa) = self.prove(cfg, a)?;
                        let (fin2, sb) = self.prove(cfg, b)?;
                        if fin != fin2 {
                            return Err(Error::Smc("both branches of a choice run, to different configurations".into()));
                        }
                        (fin, sa, sb)
                    }
                    (true, true) => return Err(Error::Smc(format!("execution blocks at `{ctrl}`"))),
                };
                let g = fin.formula();
                let (pa, pb) = (ctrl_term(a), ctrl_term(b));
                let both = self.b.mp_chain(
                    &[sa, sb],
                    here.clone().implies(bx(pa.clone(), g.clone()).and(bx(pb.clone(), g.clone()))),
                )?;
                let achoice = self.axiom("Achoice", vec![("P", pa), ("P2", pb), ("G", g.clone())])?;
                let s = self.b.mp_chain(&[both, achoice], here.implies(bx(ctrl_term(ctrl), g)))?;
                Ok((fin, s))
            }
            Ctrl::Star(_) => Err(Error::Smc("iteration is only supported when followed by a test".into())),
            Ctrl::S(_) | Ctrl::A(_) | Ctrl::B(_) => unreachable!("decomposable terms are expanded above"),
        }
    }

    /// `cfg → [body* ; rest]γ` by unfolding A* once per iteration: at every loop
    /// state either `rest` runs to `γ` and `body` is blocked, or `rest` is blocked
    /// and `body` leads to the next state.
    fn prove_loop(&mut self, cfg: &SymConfig, body: &Ctrl, rest: &Ctrl) -> Result<(SymConfig, usize)> {
        let mut states = vec![cfg.clone()];
        let mut body_steps = Vec::new();
        while Self::blocked(states.last().expect("nonempty"), rest) {
            if states.len() > self.budget {
                return Err(Error::Smc(format!("step budget of {} exceeded", self.budget)));
            }
            let (next, s) = self.prove(states.last().expect("nonempty"), body)?;
            body_steps.push(s);
            states.push(next);
        }
        let k = states.len() - 1;
        let (fin, exit) = self.prove(&states[k], rest)?;
        let gamma = fin.formula();
        let (pb, pr) = (ctrl_term(body), ctrl_term(rest));
        let star = Formula::app("star", [pb.clone()]);
        let delta = bx(pr.clone(), gamma.clone());
        let goal = bx(star.clone(), delta.clone());
        let astar = self.axiom("Astar", vec![("P", pb.clone()), ("G", delta.clone())])?;
        let mut after: Option<usize> = None;
        for i in (0..=k).rev() {
            let st = &states[i];
            let (now, next) = match after {
                None => (exit, self.prove_blocked(st, body, &goal)?),
                Some(a) => {
                    let now = self.prove_blocked(st, rest, &gamma)?;
                    let m = self.box_mono(&pb, a)?;
                    (now, self.b.tranz(body_steps[i], m)?)
                }
            };
            after = Some(self.b.mp_chain(&[now, next, astar], st.formula().implies(goal.clone()))?);
        }
        let aseq = self.axiom("Aseq", vec![("P", star.clone()), ("P2", pr.clone()), ("G", gamma.clone())])?;
        let whole = Formula::app("seq", [star, pr]);
        let s = self.b.mp_chain(
            &[after.expect("at least one state"), aseq],
            cfg.formula().implies(bx(whole, gamma)),
        )?;
        Ok((fin, s))
    }
}

fn decomposition(ctrl: &Ctrl) -> (&'static str, Vec<(&'static str, Formula)>) {
    use super::fixture::{aexp_term, bexp_term, stmt_term};
    use super::lang::BExp;
    match ctrl {
        Ctrl::S(Stmt::Seq(s1, s2)) => ("CStmt", vec![("S1", stmt_term(s1)), ("S2", stmt_term(s2))]),
        Ctrl::S(Stmt::Assign(x, a)) => ("Dasgn", vec![("X", Formula::constant(x)), ("A", aexp_term(a))]),
        Ctrl::S(Stmt::If(b, s1, s2)) => (
            "Dif",
            vec![("B", bexp_term(b)), ("S1", stmt_term(s1)), ("S2", stmt_term(s2))],
        ),
        Ctrl::S(Stmt::While(b, s)) => ("Dwhile", vec![("B", bexp_term(b)), ("S", stmt_term(s))]),
        Ctrl::A(AExp::Add(a1, a2)) => ("Dplus", vec![("A1", aexp_term(a1)), ("A2", aexp_term(a2))]),
        Ctrl::B(BExp::Le(a1, a2)) => ("Dleq", vec![("A1", aexp_term(a1)), ("A2", aexp_term(a2))]),
        _ => unreachable!("only decomposable terms are passed"),
    }
}

/// An execution proof with the signature and axioms it is checked against.
#[derive(Debug, Clone)]
pub struct ExecutionProof {
    pub sig: Signature,
    pub axioms: AxiomSet,
    pub proof: Proof,
    pub conclusion: Formula,
}

/// Proves `config(vs, mem) → [c(program)] config(vs, mem′)` where `mem′` is the
/// memory term built by the program's assignments on top of `mem`. Every variable
/// the program reads must have been assigned before.
pub fn elaborate_execution(program: &Stmt, budget: usize) -> Result<ExecutionProof> {
    // the signature needs every numeral the run produces
    let ex = explore(&Config::new(Memory::new()), &Ctrl::S(program.clone()), budget, Mode::Run, &|_| true);
    let mut nats: BTreeSet<u64> = DEFAULT_NATS.into_iter().collect();
    nats.extend(program.literals());
    if let Ok(ex) = &ex {
        for c in &ex.visited {
            nats.extend(c.stack.iter().filter_map(|v| match v {
                Value::Nat(n) => Some(*n),
                Value::Bool(_) => None,
            }));
            nats.extend(c.mem.values().copied());
        }
    }
    let mut vars: BTreeSet<String> = DEFAULT_VARS.iter().map(|s| s.to_string()).collect();
    vars.extend(program.variables());
    let sig = smc_signature_with(&nats, &vars)?;
    let axioms = smc_axioms_for(&sig, BoxReading::Pdl)?;
    let (proof, conclusion) = {
        let mut p = Prover {
            b: ProofBuilder::with_axioms(&sig, &axioms),
            budget,
        };
        let start = SymConfig {
            stack: Vec::new(),
            base: var("vs"),
            mem: var("mem"),
        };
        let (_, last) = p.prove(&start, &Ctrl::S(program.clone()))?;
        let conclusion = p.b.formula(last).clone();
        let mut proof = p.b.finish_global(Vec::new(), last);
        proof.goal = Some(conclusion.clone());
        (proof, conclusion)
    };
    Ok(ExecutionProof {
        sig,
        axioms,
        proof,
        conclusion,
    })
}

fn pgm() -> Stmt {
    parse_program(PGM_SOURCE).expect("the fixture program parses")
}

/// The final memory term of the correctness property:
/// `set(set(set(mem, i2, 2), i1, 1), m, 1)`.
pub fn pgm_final_memory() -> Formula {
    set(set(set(var("mem"), "i2", 2), "i1", 1), "m", 1)
}

/// The property proved by [`elaborate_pgm_proof`]:
/// `config(vs, mem) → [c(pgm)] config(vs, set(set(set(mem, i2, 2), i1, 1), m, 1))`.
pub fn pgm_goal() -> Formula {
    let start = config(var("vs"), var("mem"));
    start.implies(bx(ctrl_term(&Ctrl::S(pgm())), config(var("vs"), pgm_final_memory())))
}

/// The global proof of the correctness property of `pgm` over [`smc_axioms`].
pub fn elaborate_pgm_proof() -> Result<Proof> {
    let sig = smc_signature();
    let axioms = smc_axioms();
    let mut p = Prover {
        b: ProofBuilder::with_axioms(&sig, &axioms),
        budget: DEFAULT_BUDGET,
    };
    let start = SymConfig {
        stack: Vec::new(),
        base: var("vs"),
        mem: var("mem"),
    };
    let (_, last) = p.prove(&start, &Ctrl::S(pgm()))?;
    let goal = pgm_goal();
    if *p.b.formula(last) != goal {
        return Err(Error::Smc(format!(
            "the elaborated conclusion `{}` differs from the goal",
            print_formula(&sig, p.b.formula(last))
        )));
    }
    let mut proof = p.b.finish_global(Vec::new(), last);
    proof.goal = Some(goal);
    Ok(proof)
}

/// `set(set(set(mem, i2, 2), i1, 1), m, 1) → get(m, 1)`, an AMem1 instance.
pub fn mem_get_theorem() -> Result<Proof> {
    let sig = smc_signature();
    let axioms = smc_axioms();
    let mut b = ProofBuilder::with_axioms(&sig, &axioms);
    let inner = set(set(var("mem"), "i2", 2), "i1", 1);
    let last = b.axiom(
        "AMem1",
        binding([("M", inner), ("X", Formula::constant("m")), ("N", nat_term(1))]),
    )?;
    let goal = pgm_final_memory().implies(Formula::app("get", [Formula::constant("m"), nat_term(1)]));
    let mut proof = b.finish_global(Vec::new(), last);
    proof.goal = Some(goal);
    Ok(proof)
}

/// The steps of the written proof of the correctness property, as formulas of the
/// fixture signature. Sequences in boxes associate to the left.
pub fn pgm_reference_steps() -> Vec<(&'static str, Formula)> {
    let c = |n: u64| Formula::app("ca", [Formula::app("num", [nat_term(n)])]);
    let cid = |x: &str| Formula::app("ca", [Formula::app("id", [Formula::constant(x)])]);
    let asgn = |x: &str| Formula::app("asgn", [Formula::constant(x)]);
    let test = |b: bool| Formula::app("test", [value_term(&Value::Bool(b))]);
    let sq = |a: Formula, b: Formula| Formula::app("seq", [a, b]);
    let tv = value_term(&Value::Bool(true));
    let vs = var("vs");
    let cfg = config;
    let m1 = set(var("mem"), "i1", 1);
    let m2 = set(m1.clone(), "i2", 2);
    let m2r = set(set(var("mem"), "i2", 2), "i1", 1);
    let m3 = pgm_final_memory();
    let start = cfg(vs.clone(), var("mem"));
    let p5 = sq(c(1), asgn("i1"));
    let p9 = sq(sq(p5.clone(), c(2)), asgn("i2"));
    let p16 = sq(sq(sq(p9.clone(), cid("i2")), cid("i1")), Formula::constant("leq"));
    let at_true = cfg(cons(tv.clone(), vs.clone()), m2r.clone());
    let end = cfg(vs.clone(), m3.clone());
    let then_branch = sq(sq(test(true), cid("i1")), asgn("m"));
    let else_tail = sq(cid("i2"), asgn("m"));
    let else_branch = sq(test(false), else_tail.clone());
    let s1 = cfg(cons(vnat(1), vs.clone()), var("mem"));
    let s2 = cfg(vs.clone(), m1.clone());
    let s6 = cfg(cons(vnat(2), vs.clone()), m1.clone());
    let s7 = cfg(vs.clone(), m2.clone());
    let s12 = cfg(cons(vnat(2), vs.clone()), m2r.clone());
    let s13 = cfg(cons(vnat(1), cons(vnat(2), vs.clone())), m2r.clone());
    vec![
        ("1", start.clone().implies(bx(c(1), s1.clone()))),
        ("2", s1.clone().implies(bx(asgn("i1"), s2.clone()))),
        ("3", bx(c(1), s1.clone()).implies(bx(c(1), bx(asgn("i1"), s2.clone())))),
        ("4", bx(c(1), s1.clone()).implies(bx(p5.clone(), s2.clone()))),
        ("5", start.clone().implies(bx(p5.clone(), s2.clone()))),
        ("6", s2.clone().implies(bx(c(2), s6.clone()))),
        ("7", s6.clone().implies(bx(asgn("i2"), s7.clone()))),
        ("8", bx(c(2), s6.clone()).implies(bx(c(2), bx(asgn("i2"), s7.clone())))),
        ("9", start.clone().implies(bx(p9.clone(), s7.clone()))),
        ("10", s7.clone().implies(bx(cid("i2"), cfg(cons(vnat(2), vs.clone()), m2.clone())))),
        ("11", s7.clone().implies(bx(cid("i2"), s12.clone()))),
        ("12", s12.clone().implies(bx(cid("i1"), s13.clone()))),
        ("13", s7.clone().implies(bx(cid("i2"), bx(cid("i1"), s13.clone())))),
        ("14", start.clone().implies(bx(p9.clone(), bx(cid("i2"), bx(cid("i1"), s13.clone()))))),
        ("15", s13.clone().implies(bx(Formula::constant("leq"), at_true.clone()))),
        ("16", start.clone().implies(bx(p16, at_true.clone()))),
        ("17", at_true.clone().implies(bx(test(true), cfg(vs.clone(), m2r.clone())))),
        ("18", cfg(vs.clone(), m2r.clone()).implies(bx(cid("i1"), cfg(cons(vnat(1), vs.clone()), m2r.clone())))),
        ("19", cfg(cons(vnat(1), vs.clone()), m2r.clone()).implies(bx(asgn("m"), end.clone()))),
        ("20", at_true.clone().implies(bx(then_branch.clone(), end.clone()))),
        ("21", at_true.clone().implies(bx(test(false), bx(else_tail, end.clone())))),
        ("21'", at_true.clone().implies(bx(else_branch.clone(), end.clone()))),
        (
            "22",
            at_true
                .clone()
                .implies(bx(then_branch.clone(), end.clone()).and(bx(else_branch.clone(), end.clone()))),
        ),
        (
            "22'",
            at_true.implies(bx(Formula::app("choice", [then_branch, else_branch]), end.clone())),
        ),
        ("23", pgm_goal()),
    ]
}

/// For each written proof step, the kernel step proving exactly that formula, if
/// the elaboration proves it verbatim. Steps the elaboration reaches under a
/// different grouping of `;` or before unfolding `c(x := a)` map to `None`.
pub fn pgm_step_map(proof: &Proof) -> Vec<(&'static str, Option<usize>)> {
    pgm_reference_steps()
        .into_iter()
        .map(|(label, f)| (label, proof.steps.iter().position(|s| s.formula == f).map(|i| i + 1)))
        .collect()
}

/// The proof with step `k` (1-based) removed and later references shifted down.
pub fn delete_step(proof: &Proof, k: usize) -> Proof {
    let mut steps = proof.steps.clone();
    steps.remove(k - 1);
    for s in &mut steps {
        s.just.renumber(|p| if p > k { p - 1 } else { p });
    }
    Proof { steps, ..proof.clone() }
}
