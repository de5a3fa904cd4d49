//! The SMC machine: configurations, control terms and the small-step interpreter.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use super::lang::{AExp, BExp, Stmt};
use crate::error::{Error, Result};

/// Default interpreter step budget.
pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Nat(u64),
    Bool(bool),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Canonical memory: unset variables read as 0.
pub type Memory = BTreeMap<String, u64>;

/// A machine state `config(vs, mem)`; `stack[0]` is the top of the value stack.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub stack: Vec<Value>,
    pub mem: Memory,
}

impl Config {
    pub fn new(mem: Memory) -> Config {
        Config { stack: Vec::new(), mem }
    }

    fn pop(&mut self, at: &Ctrl) -> Result<Value> {
        if self.stack.is_empty() {
            return Err(Error::Smc(format!("stack underflow executing `{at}` in {self}")));
        }
        Ok(self.stack.remove(0))
    }

    fn pop_nat(&mut self, at: &Ctrl) -> Result<u64> {
        match self.pop(at)? {
            Value::Nat(n) => Ok(n),
            v => Err(Error::Smc(format!("`{at}` expects a natural on the stack, found `{v}`"))),
        }
    }

    fn push(&mut self, v: Value) {
        self.stack.insert(0, v);
    }
}

pub fn show_stack(stack: &[Value]) -> String {
    let mut out = String::new();
    for v in stack {
        out.push_str(&format!("{v}."));
    }
    out.push_str("nil");
    out
}

pub fn show_mem(mem: &Memory) -> String {
    let items: Vec<String> = mem.iter().map(|(x, n)| format!("{x}={n}")).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config({}, {})", show_stack(&self.stack), show_mem(&self.mem))
    }
}

/// Control-stack terms, extended with `∪` and `*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ctrl {
    A(AExp),
    B(BExp),
    S(Stmt),
    Asgn(String),
    Plus,
    Leq,
    Test(Value),
    Seq(Box<Ctrl>, Box<Ctrl>),
    Choice(Box<Ctrl>, Box<Ctrl>),
    Star(Box<Ctrl>),
}

impl fmt::Display for Ctrl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ctrl::A(a) => write!(f, "c({a})"),
            Ctrl::B(b) => write!(f, "c({b})"),
            Ctrl::S(s) => write!(f, "c({s})"),
            Ctrl::Asgn(x) => write!(f, "asgn({x})"),
            Ctrl::Plus => f.write_str("plus"),
            Ctrl::Leq => f.write_str("leq"),
            Ctrl::Test(v) => write!(f, "{v}?"),
            Ctrl::Seq(a, b) => write!(f, "({a} ; {b})"),
            Ctrl::Choice(a, b) => write!(f, "({a} + {b})"),
            Ctrl::Star(a) => write!(f, "({a})*"),
        }
    }
}

fn seq(a: Ctrl, b: Ctrl) -> Ctrl {
    Ctrl::Seq(Box::new(a), Box::new(b))
}

impl Ctrl {
    /// The right-hand side of the decomposition axiom (CStmt, Dasgn, Dif, Dwhile,
    /// Dplus, Dleq) whose left-hand side is this term, if any.
    pub fn expansion(&self) -> Option<Ctrl> {
        let test = |b| Ctrl::Test(Value::Bool(b));
        Some(match self {
            Ctrl::S(Stmt::Seq(s1, s2)) => seq(Ctrl::S((**s1).clone()), Ctrl::S((**s2).clone())),
            Ctrl::S(Stmt::Assign(x, a)) => seq(Ctrl::A(a.clone()), Ctrl::Asgn(x.clone())),
            Ctrl::S(Stmt::If(b, s1, s2)) => seq(
                Ctrl::B(b.clone()),
                Ctrl::Choice(
                    Box::new(seq(test(true), Ctrl::S((**s1).clone()))),
                    Box::new(seq(test(false), Ctrl::S((**s2).clone()))),
                ),
            ),
            Ctrl::S(Stmt::While(b, s)) => seq(
                Ctrl::B(b.clone()),
                seq(
                    Ctrl::Star(Box::new(seq(test(true), seq(Ctrl::S((**s).clone()), Ctrl::B(b.clone()))))),
                    test(false),
                ),
            ),
            Ctrl::A(AExp::Add(a1, a2)) => seq(Ctrl::A((**a1).clone()), seq(Ctrl::A((**a2).clone()), Ctrl::Plus)),
            Ctrl::B(BExp::Le(a1, a2)) => seq(Ctrl::A(a2.clone()), seq(Ctrl::A(a1.clone()), Ctrl::Leq)),
            _ => return None,
        })
    }

    /// Normal form modulo the decomposition axioms: every decomposable subterm is
    /// replaced by its expansion.
    pub fn normalize(&self) -> Ctrl {
        if let Some(e) = self.expansion() {
            return e.normalize();
        }
        match self {
            Ctrl::Seq(a, b) => seq(a.normalize(), b.normalize()),
            Ctrl::Choice(a, b) => Ctrl::Choice(Box::new(a.normalize()), Box::new(b.normalize())),
            Ctrl::Star(a) => Ctrl::Star(Box::new(a.normalize())),
            c => c.clone(),
        }
    }

    /// Immediate subterms of sort CtrlStack.
    pub fn children(&self) -> Vec<&Ctrl> {
        match self {
            Ctrl::Seq(a, b) | Ctrl::Choice(a, b) => vec![a, b],
            Ctrl::Star(a) => vec![a],
            _ => Vec::new(),
        }
    }
}

fn lookup(mem: &Memory, x: &str) -> u64 {
    mem.get(x).copied().unwrap_or(0)
}

/// One small step. Returns the successor configurations with their remaining
/// control (`None` once the control is exhausted); an empty set means the step is
/// blocked by a failing test.
pub fn smc_step(config: &Config, ctrl: &Ctrl) -> Result<Vec<(Config, Option<Ctrl>)>> {
    if let Some(e) = ctrl.expansion() {
        return Ok(vec![(config.clone(), Some(e))]);
    }
    let mut c = config.clone();
    match ctrl {
        Ctrl::Seq(a, b) => {
            let out = smc_step(config, a)?;
            return Ok(out
                .into_iter()
                .map(|(c, rest)| {
                    let next = match rest {
                        None => (**b).clone(),
                        Some(r) => seq(r, (**b).clone()),
                    };
                    (c, Some(next))
                })
                .collect());
        }
        Ctrl::Choice(a, b) => {
            return Ok(vec![(c.clone(), Some((**a).clone())), (c, Some((**b).clone()))]);
        }
        Ctrl::Star(a) => {
            let again = seq((**a).clone(), ctrl.clone());
            return Ok(vec![(c.clone(), None), (c, Some(again))]);
        }
        Ctrl::S(Stmt::Skip) => {}
        Ctrl::A(AExp::Num(n)) => c.push(Value::Nat(*n)),
        Ctrl::A(AExp::Var(x)) => c.push(Value::Nat(lookup(&c.mem, x))),
        Ctrl::Plus => {
            let n2 = c.pop_nat(ctrl)?;
            let n1 = c.pop_nat(ctrl)?;
            let n = n1
                .checked_add(n2)
                .ok_or_else(|| Error::Smc(format!("overflow in {n1} + {n2}")))?;
            c.push(Value::Nat(n));
        }
        Ctrl::Leq => {
            let n1 = c.pop_nat(ctrl)?;
            let n2 = c.pop_nat(ctrl)?;
            c.push(Value::Bool(n1 <= n2));
        }
        Ctrl::Test(v) => {
            if c.pop(ctrl)? != *v {
                return Ok(Vec::new());
            }
        }
        Ctrl::Asgn(x) => {
            let n = c.pop_nat(ctrl)?;
            c.mem.insert(x.clone(), n);
        }
        Ctrl::S(_) | Ctrl::A(_) | Ctrl::B(_) => unreachable!("decomposable terms are expanded above"),
    }
    Ok(vec![(c, None)])
}

/// All states visited while executing a control term.
#[derive(Debug, Clone, Default)]
pub struct Exploration {
    /// Configurations reached with empty control.
    pub finals: BTreeSet<Config>,
    /// States with remaining control but no successor.
    pub stuck: Vec<(Config, Ctrl)>,
    /// Every configuration visited, including intermediate ones.
    pub visited: BTreeSet<Config>,
    /// Every control term visited.
    pub controls: BTreeSet<Ctrl>,
    pub steps: usize,
}

/// How [`explore`] treats ill-formed steps and repeated states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Ill-formed steps are errors; repeated states are explored again, so a
    /// diverging loop exhausts the budget.
    Run,
    /// Ill-formed steps block; repeated states are explored once.
    Model,
}

/// Exhaustive exploration of `smc_step` from `(config, ctrl)`. States whose
/// configuration fails `allow` are dropped.
pub fn explore(
    config: &Config,
    ctrl: &Ctrl,
    budget: usize,
    mode: Mode,
    allow: &dyn Fn(&Config) -> bool,
) -> Result<Exploration> {
    let mut out = Exploration::default();
    let mut seen: HashSet<(Config, Ctrl)> = HashSet::new();
    let mut stack = vec![(config.clone(), ctrl.clone())];
    out.visited.insert(config.clone());
    while let Some((c, k)) = stack.pop() {
        if mode == Mode::Model && !seen.insert((c.clone(), k.clone())) {
            continue;
        }
        out.controls.insert(k.clone());
        out.steps += 1;
        if out.steps > budget {
            return Err(Error::Smc(format!("step budget of {budget} exceeded")));
        }
        let next = match smc_step(&c, &k) {
            Ok(next) => next,
            Err(e) if mode == Mode::Run => return Err(e),
            Err(_) => Vec::new(),
        };
        let mut moved = false;
        for (c2, rest) in next {
            if !allow(&c2) {
                continue;
            }
            moved = true;
            out.visited.insert(c2.clone());
            match rest {
                None => {
                    out.finals.insert(c2);
                }
                Some(r) => stack.push((c2, r)),
            }
        }
        if !moved {
            out.stuck.push((c, k));
        }
    }
    Ok(out)
}

/// Final configurations of running `program` from `config(nil, mem)`.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub finals: Vec<Config>,
    pub steps: usize,
}

/// Runs a program to completion. Errors if the budget is exceeded, if a step is
/// ill-formed, or if no branch reaches an empty control stack (reporting a
/// stuck configuration).
pub fn smc_run(program: &Stmt, mem: Memory, budget: usize) -> Result<RunOutcome> {
    let start = Config::new(mem);
    let ex = explore(&start, &Ctrl::S(program.clone()), budget, Mode::Run, &|_| true)?;
    if ex.finals.is_empty() {
        let (c, k) = ex
            .stuck
            .first()
            .cloned()
            .unwrap_or((start, Ctrl::S(program.clone())));
        return Err(Error::Smc(format!("execution blocked at {c} with control `{k}`")));
    }
    Ok(RunOutcome {
        finals: ex.finals.into_iter().collect(),
        steps: ex.steps,
    })
}

/// Parses `x=1,y=2` into a memory.
pub fn parse_memory(text: &str) -> Result<Memory> {
    let mut mem = Memory::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (x, n) = item
            .split_once('=')
            .ok_or_else(|| Error::Smc(format!("expected `x=n`, found `{item}`")))?;
        let n = n
            .trim()
            .parse()
            .map_err(|_| Error::Smc(format!("`{}` is not a natural number", n.trim())))?;
        mem.insert(x.trim().to_string(), n);
    }
    Ok(mem)
}
