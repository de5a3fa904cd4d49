//! A finite model of the SMC axioms built from an interpreter run.
//!
//! Worlds of the syntactic sorts are the program's subterms; control worlds are
//! control terms in normal form modulo the decomposition axioms; value stacks
//! and configurations are those met during the run, memories those met and
//! their restrictions. Constructor operations are interpreted by the graph of
//! construction, `exec` by interpreter reachability through configurations of
//! the model.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;
use std::sync::Arc;

use super::fixture::{
    aexp_term, bexp_term, ctrl_term, nat_term, smc_signature_with, stack_term, stmt_term, value_term,
    BoxReading, DEFAULT_NATS, DEFAULT_VARS,
};
use super::lang::{AExp, BExp, Stmt};
use super::machine::{explore, Config, Ctrl, Memory, Mode, Value};
use crate::error::{Error, Result};
use crate::proof::{check_guard, AxiomScheme, AxiomSet, Binding};
use crate::semantics::{failing_world, truth_set, Frame, Model, World};
use crate::syntax::{print_formula, Formula, Signature, SortId};

struct Pool<T> {
    items: Vec<T>,
    index: HashMap<T, World>,
}

impl<T: Clone + Eq + Hash> Pool<T> {
    fn new() -> Self {
        Pool {
            items: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn add(&mut self, t: T) -> World {
        if let Some(&w) = self.index.get(&t) {
            return w;
        }
        let w = self.items.len() as World;
        self.items.push(t.clone());
        self.index.insert(t, w);
        w
    }

    fn get(&self, t: &T) -> Option<World> {
        self.index.get(t).copied()
    }
}

fn aexp_subterms(a: &AExp, out: &mut BTreeSet<AExp>) {
    out.insert(a.clone());
    if let AExp::Add(x, y) = a {
        aexp_subterms(x, out);
        aexp_subterms(y, out);
    }
}

fn stmt_subterms(s: &Stmt, stmts: &mut BTreeSet<Stmt>, bexps: &mut BTreeSet<BExp>, aexps: &mut BTreeSet<AExp>) {
    stmts.insert(s.clone());
    let mut bexp = |b: &BExp, aexps: &mut BTreeSet<AExp>| {
        bexps.insert(b.clone());
        let BExp::Le(x, y) = b;
        aexp_subterms(x, aexps);
        aexp_subterms(y, aexps);
    };
    match s {
        Stmt::Assign(_, a) => aexp_subterms(a, aexps),
        Stmt::If(b, s1, s2) => {
            bexp(b, aexps);
            stmt_subterms(s1, stmts, bexps, aexps);
            stmt_subterms(s2, stmts, bexps, aexps);
        }
        Stmt::While(b, body) => {
            bexp(b, aexps);
            stmt_subterms(body, stmts, bexps, aexps);
        }
        Stmt::Skip => {}
        Stmt::Seq(s1, s2) => {
            stmt_subterms(s1, stmts, bexps, aexps);
            stmt_subterms(s2, stmts, bexps, aexps);
        }
    }
}

fn ctrl_closure(c: &Ctrl, out: &mut BTreeSet<Ctrl>) {
    if out.insert(c.clone()) {
        for k in c.children() {
            ctrl_closure(k, out);
        }
    }
}

fn mem_term(mem: &Memory) -> Formula {
    mem.iter().fold(Formula::constant("empty"), |acc, (x, n)| {
        Formula::app("set", [acc, Formula::constant(x), nat_term(*n)])
    })
}

fn config_term(c: &Config) -> Formula {
    Formula::app("config", [stack_term(&c.stack, Formula::constant("nil")), mem_term(&c.mem)])
}

/// The term model of a program run.
#[derive(Debug, Clone)]
pub struct TermModel {
    pub model: Model,
    /// `terms[s][w]`: the ground term denoting world `w`, or `None` for padding.
    pub terms: Vec<Vec<Option<Formula>>>,
    /// The configuration world the program starts from.
    pub start: World,
    /// Configuration worlds reached with empty control.
    pub finals: Vec<World>,
    /// Control worlds whose `exec` relation was cut off by the budget from some
    /// configuration.
    pub truncated: Vec<World>,
}

impl TermModel {
    pub fn signature(&self) -> &Arc<Signature> {
        self.model.signature()
    }

    /// The worlds of sort `s` that are denoted by a term, with their terms.
    pub fn term_worlds(&self, s: SortId) -> impl Iterator<Item = (World, &Formula)> + '_ {
        self.terms[s.index()]
            .iter()
            .enumerate()
            .filter_map(|(w, t)| t.as_ref().map(|t| (w as World, t)))
    }
}

/// Builds the term model of running `program` from `config(nil, mem)`.
pub fn build_term_model(program: &Stmt, mem: Memory, budget: usize) -> Result<TermModel> {
    let start = Config::new(mem);
    let run = explore(&start, &Ctrl::S(program.clone()), budget, Mode::Model, &|_| true)?;

    // syntactic sorts
    let (mut stmts, mut bexps, mut aexps) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    stmt_subterms(program, &mut stmts, &mut bexps, &mut aexps);

    // numerals and variables
    let mut nats: BTreeSet<u64> = DEFAULT_NATS.into_iter().collect();
    nats.extend(program.literals());
    let mut vars: BTreeSet<String> = DEFAULT_VARS.iter().map(|s| s.to_string()).collect();
    vars.extend(program.variables());
    for c in &run.visited {
        for v in &c.stack {
            if let Value::Nat(n) = v {
                nats.insert(*n);
            }
        }
        nats.extend(c.mem.values().copied());
        vars.extend(c.mem.keys().cloned());
    }
    let sig = Arc::new(smc_signature_with(&nats, &vars)?);

    // values, stacks, memories, configurations
    let mut values = Pool::new();
    for n in &nats {
        values.add(Value::Nat(*n));
    }
    values.add(Value::Bool(false));
    values.add(Value::Bool(true));
    let mut stacks: Pool<Vec<Value>> = Pool::new();
    let mut mems: Pool<Memory> = Pool::new();
    let mut configs: Pool<Config> = Pool::new();
    for c in &run.visited {
        for i in (0..=c.stack.len()).rev() {
            stacks.add(c.stack[i..].to_vec());
        }
        mems.add(c.mem.clone());
        configs.add(c.clone());
    }
    // sub-memories, so that set-terms may write the final bindings in any order
    let mut pending: Vec<Memory> = mems.items.clone();
    while let Some(m) = pending.pop() {
        for x in m.keys() {
            let mut smaller = m.clone();
            smaller.remove(x);
            if mems.get(&smaller).is_none() {
                mems.add(smaller.clone());
                pending.push(smaller);
            }
        }
    }

    // control terms, normalized, closed under subterms
    let mut ctrl_set = BTreeSet::new();
    let seeds = run
        .controls
        .iter()
        .cloned()
        .chain(stmts.iter().cloned().map(Ctrl::S))
        .chain(bexps.iter().cloned().map(Ctrl::B))
        .chain(aexps.iter().cloned().map(Ctrl::A))
        .chain(vars.iter().cloned().map(Ctrl::Asgn))
        .chain(values.items.iter().copied().map(Ctrl::Test))
        .chain([Ctrl::Plus, Ctrl::Leq, Ctrl::S(Stmt::Skip)]);
    for c in seeds {
        ctrl_closure(&c.normalize(), &mut ctrl_set);
    }
    // iterations of the basic instructions, so that A* has instances without loops
    let basic: Vec<Ctrl> = ctrl_set
        .iter()
        .filter(|c| matches!(c, Ctrl::A(_) | Ctrl::Asgn(_) | Ctrl::Plus | Ctrl::Leq | Ctrl::Test(_)))
        .cloned()
        .collect();
    for c in basic {
        ctrl_closure(&Ctrl::Star(Box::new(c)).normalize(), &mut ctrl_set);
    }
    let mut ctrls = Pool::new();
    for c in ctrl_set {
        ctrls.add(c);
    }

    let nat_list: Vec<u64> = nats.iter().copied().collect();
    let var_list: Vec<String> = vars.iter().cloned().collect();
    let stmt_list: Vec<Stmt> = stmts.into_iter().collect();
    let bexp_list: Vec<BExp> = bexps.into_iter().collect();
    let aexp_list: Vec<AExp> = aexps.into_iter().collect();
    let sort = |name: &str| sig.sort(name).expect("fixture sort");
    let mut terms: Vec<Vec<Option<Formula>>> = vec![Vec::new(); sig.num_sorts()];
    terms[sort("Nat").index()] = nat_list.iter().map(|n| Some(nat_term(*n))).collect();
    terms[sort("Var").index()] = var_list.iter().map(|x| Some(Formula::constant(x))).collect();
    terms[sort("Bool").index()] = vec![Some(Formula::constant("false")), Some(Formula::constant("true"))];
    terms[sort("AExp").index()] = aexp_list.iter().map(|a| Some(aexp_term(a))).collect();
    terms[sort("BExp").index()] = bexp_list.iter().map(|b| Some(bexp_term(b))).collect();
    terms[sort("Stmt").index()] = stmt_list.iter().map(|s| Some(stmt_term(s))).collect();
    terms[sort("Val").index()] = values.items.iter().map(|v| Some(value_term(v))).collect();
    terms[sort("ValStack").index()] = stacks
        .items
        .iter()
        .map(|s| Some(stack_term(s, Formula::constant("nil"))))
        .collect();
    terms[sort("Mem").index()] = mems.items.iter().map(|m| Some(mem_term(m))).collect();
    terms[sort("CtrlStack").index()] = ctrls.items.iter().map(|c| Some(ctrl_term(c))).collect();
    terms[sort("Config").index()] = configs.items.iter().map(|c| Some(config_term(c))).collect();
    for s in sig.sorts() {
        if terms[s.index()].is_empty() {
            terms[s.index()].push(None);
        }
    }
    let names = sig
        .sorts()
        .map(|s| {
            let prefix = sig.sort_name(s).to_lowercase();
            (0..terms[s.index()].len())
                .map(|i| match terms[s.index()][i] {
                    Some(_) => format!("{prefix}_{i}"),
                    None => format!("{prefix}_pad"),
                })
                .collect()
        })
        .collect();
    let mut frame = Frame::with_names(sig.clone(), names)?;

    let nat_w = |n: u64| nat_list.binary_search(&n).ok().map(|i| i as World);
    let var_w = |x: &str| var_list.iter().position(|v| v == x).map(|i| i as World);
    let aexp_w = |a: &AExp| aexp_list.binary_search(a).ok().map(|i| i as World);
    let bexp_w = |b: &BExp| bexp_list.binary_search(b).ok().map(|i| i as World);
    let stmt_w = |s: &Stmt| stmt_list.binary_search(s).ok().map(|i| i as World);
    let bool_w = |b: bool| b as World;
    let ctrl_w = |c: &Ctrl| ctrls.get(&c.normalize());
    let mut rel = |name: &str, tuple: Vec<Option<World>>| -> Result<()> {
        if let Some(t) = tuple.into_iter().collect::<Option<Vec<World>>>() {
            frame.add_tuple(sig.op_or_err(name)?, &t)?;
        }
        Ok(())
    };

    for (i, n) in nat_list.iter().enumerate() {
        rel(&n.to_string(), vec![Some(i as World)])?;
    }
    for (i, x) in var_list.iter().enumerate() {
        rel(x, vec![Some(i as World)])?;
    }
    rel("false", vec![Some(0)])?;
    rel("true", vec![Some(1)])?;
    for (i, a) in aexp_list.iter().enumerate() {
        let w = Some(i as World);
        match a {
            AExp::Num(n) => rel("num", vec![w, nat_w(*n)])?,
            AExp::Var(x) => rel("id", vec![w, var_w(x)])?,
            AExp::Add(x, y) => rel("add", vec![w, aexp_w(x), aexp_w(y)])?,
        }
        rel("ca", vec![ctrl_w(&Ctrl::A(a.clone())), w])?;
    }
    for (i, b) in bexp_list.iter().enumerate() {
        let BExp::Le(x, y) = b;
        rel("le", vec![Some(i as World), aexp_w(x), aexp_w(y)])?;
        rel("cb", vec![ctrl_w(&Ctrl::B(b.clone())), Some(i as World)])?;
    }
    for (i, s) in stmt_list.iter().enumerate() {
        let w = Some(i as World);
        match s {
            Stmt::Assign(x, a) => rel("assign", vec![w, var_w(x), aexp_w(a)])?,
            Stmt::If(b, s1, s2) => rel("ite", vec![w, bexp_w(b), stmt_w(s1), stmt_w(s2)])?,
            Stmt::While(b, body) => rel("while", vec![w, bexp_w(b), stmt_w(body)])?,
            Stmt::Skip => rel("skip", vec![w])?,
            Stmt::Seq(s1, s2) => rel("sseq", vec![w, stmt_w(s1), stmt_w(s2)])?,
        }
        rel("cs", vec![ctrl_w(&Ctrl::S(s.clone())), w])?;
    }
    for (i, v) in values.items.iter().enumerate() {
        let w = Some(i as World);
        match v {
            Value::Nat(n) => rel("vnat", vec![w, nat_w(*n)])?,
            Value::Bool(b) => rel("vbool", vec![w, Some(bool_w(*b))])?,
        }
    }
    for (i, s) in stacks.items.iter().enumerate() {
        let w = Some(i as World);
        match s.split_first() {
            None => rel("nil", vec![w])?,
            Some((v, rest)) => rel("cons", vec![w, values.get(v), stacks.get(&rest.to_vec())])?,
        }
    }
    for (i, m) in mems.items.iter().enumerate() {
        let w = Some(i as World);
        if m.is_empty() {
            rel("empty", vec![w])?;
        }
        for (j, x) in var_list.iter().enumerate() {
            let value = m.get(x).copied().unwrap_or(0);
            rel("get", vec![w, Some(j as World), nat_w(value)])?;
            for n in &nat_list {
                let mut m2 = m.clone();
                m2.insert(x.clone(), *n);
                rel("set", vec![mems.get(&m2), w, Some(j as World), nat_w(*n)])?;
            }
        }
    }
    for (i, c) in ctrls.items.iter().enumerate() {
        let w = Some(i as World);
        match c {
            Ctrl::Asgn(x) => rel("asgn", vec![w, var_w(x)])?,
            Ctrl::Plus => rel("plus", vec![w])?,
            Ctrl::Leq => rel("leq", vec![w])?,
            Ctrl::Test(v) => rel("test", vec![w, values.get(v)])?,
            Ctrl::Seq(a, b) => rel("seq", vec![w, ctrls.get(a), ctrls.get(b)])?,
            Ctrl::Choice(a, b) => rel("choice", vec![w, ctrls.get(a), ctrls.get(b)])?,
            Ctrl::Star(a) => rel("star", vec![w, ctrls.get(a)])?,
            // c(·) of atomic expressions and skip are handled with their arguments
            Ctrl::A(_) | Ctrl::B(_) | Ctrl::S(_) => {}
        }
    }
    for (i, c) in configs.items.iter().enumerate() {
        rel("config", vec![Some(i as World), stacks.get(&c.stack), mems.get(&c.mem)])?;
    }

    let exec = sig.op_or_err("exec")?;
    let mut truncated = BTreeSet::new();
    let inside = |c: &Config| configs.get(c).is_some();
    for (ci, c) in configs.items.iter().enumerate() {
        for (pi, p) in ctrls.items.iter().enumerate() {
            match explore(c, p, budget, Mode::Model, &inside) {
                Ok(ex) => {
                    for f in &ex.finals {
                        let fi = configs.get(f).expect("explored configurations stay inside");
                        frame.add_tuple(exec, &[ci as World, pi as World, fi])?;
                    }
                }
                Err(Error::Smc(_)) => {
                    truncated.insert(pi as World);
                }
                Err(e) => return Err(e),
            }
        }
    }

    let start_w = configs.get(&start).expect("start configuration is visited");
    let finals = run.finals.iter().filter_map(|c| configs.get(c)).collect();
    Ok(TermModel {
        model: Model::new(frame),
        terms,
        start: start_w,
        finals,
        truncated: truncated.into_iter().collect(),
    })
}

/// Coherence results for one scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeReport {
    pub name: String,
    /// Guard-satisfying instances whose terms all denote worlds; each was model-checked.
    pub checked: usize,
    /// Instances containing a term that denotes no world of the model.
    pub not_instantiable: usize,
    /// Instances mentioning a control world whose `exec` relation was truncated.
    pub budget_skipped: usize,
    /// Failing instances, as (instance number, formula, failing world name).
    pub failures: Vec<(usize, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceReport {
    pub reading: BoxReading,
    pub schemes: Vec<SchemeReport>,
}

impl CoherenceReport {
    pub fn is_ok(&self) -> bool {
        self.schemes.iter().all(|s| s.failures.is_empty())
    }

    pub fn checked(&self) -> usize {
        self.schemes.iter().map(|s| s.checked).sum()
    }
}

// every application other than `exec` and `get` must denote some world
fn instantiable(model: &Model, f: &Formula) -> Result<bool> {
    Ok(match f {
        Formula::Var(_) => true,
        Formula::Not(a) => instantiable(model, a)?,
        Formula::Or(a, b) => instantiable(model, a)? && instantiable(model, b)?,
        Formula::App(op, args) if &**op == "exec" || &**op == "get" => {
            for a in args.iter() {
                if !instantiable(model, a)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::App(..) => truth_set(model, f)?.count_ones(..) > 0,
    })
}

fn mentions(f: &Formula, t: &Formula) -> bool {
    if f == t {
        return true;
    }
    match f {
        Formula::Var(_) => false,
        Formula::Not(a) => mentions(a, t),
        Formula::Or(a, b) => mentions(a, t) || mentions(b, t),
        Formula::App(_, args) => args.iter().any(|a| mentions(a, t)),
    }
}

fn check_scheme(tm: &TermModel, scheme: &AxiomScheme, truncated: &[Formula], max_failures: usize) -> Result<SchemeReport> {
    let sig = tm.signature();
    let domains: Vec<Vec<Formula>> = scheme
        .metavars
        .iter()
        .map(|(_, s)| tm.term_worlds(*s).map(|(_, t)| t.clone()).collect())
        .collect();
    let mut report = SchemeReport {
        name: scheme.name.to_string(),
        checked: 0,
        not_instantiable: 0,
        budget_skipped: 0,
        failures: Vec::new(),
    };
    if domains.iter().any(Vec::is_empty) {
        return Ok(report);
    }
    let mut idx = vec![0usize; domains.len()];
    let mut number = 0;
    loop {
        let binding: Binding = scheme
            .metavars
            .iter()
            .zip(&idx)
            .zip(&domains)
            .map(|(((m, _), i), d)| (m.clone(), d[*i].clone()))
            .collect();
        if scheme.guards.iter().all(|g| check_guard(sig, g, &binding).is_ok()) {
            number += 1;
            let inst = scheme.instantiate(sig, &binding)?;
            if truncated.iter().any(|t| mentions(&inst, t)) {
                report.budget_skipped += 1;
            } else if !instantiable(&tm.model, &inst)? {
                report.not_instantiable += 1;
            } else {
                report.checked += 1;
                if let Some(w) = failing_world(&tm.model, &inst)? {
                    if report.failures.len() < max_failures {
                        let s = sig.sort_of(&inst)?;
                        report.failures.push((
                            number,
                            print_formula(sig, &inst),
                            tm.model.frame.world_name(s, w).to_string(),
                        ));
                    }
                }
            }
        }
        // odometer over the domains, last metavariable fastest
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(report);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Model-checks every guard-satisfying instance of every scheme over the term
/// worlds of the model. Instances are numbered in enumeration order, which only
/// depends on the model.
pub fn coherence(tm: &TermModel, axioms: &AxiomSet, reading: BoxReading) -> Result<CoherenceReport> {
    let ctrl = tm.signature().sort_or_err("CtrlStack")?;
    let truncated: Vec<Formula> = tm
        .truncated
        .iter()
        .filter_map(|w| tm.terms[ctrl.index()][*w as usize].clone())
        .collect();
    let schemes = axioms
        .schemes()
        .iter()
        .map(|s| check_scheme(tm, s, &truncated, 5))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoherenceReport { reading, schemes })
}

/// Per-sort counts of term worlds, for reporting.
pub fn world_counts(tm: &TermModel) -> BTreeMap<String, usize> {
    let sig = tm.signature();
    sig.sorts()
        .map(|s| (sig.sort_name(s).to_string(), tm.term_worlds(s).count()))
        .collect()
}

/// `.msig` text of the memory fragment: sorts `Nat`, `Var` and `Mem` with the
/// numerals, program variables, `empty`, `set` and `get`.
pub fn memory_msig(nats: &BTreeSet<u64>, vars: &BTreeSet<String>) -> String {
    let mut out = String::from("sort Nat\nsort Var\nsort Mem\n");
    for n in nats {
        out.push_str(&format!("op {n} : -> Nat\n"));
    }
    for x in vars {
        out.push_str(&format!("op {x} : -> Var\n"));
    }
    out.push_str("op empty : -> Mem\nop set : Mem Var Nat -> Mem\nop get : Var Nat -> Mem\n");
    out.push_str("var nv : Nat\nvar xv : Var\nvar mem : Mem\n");
    out
}

/// The memory fragment over every partial memory from `vars` to `nats`, one world
/// per canonical memory, with `set` and `get` read as in [`build_term_model`].
pub fn memory_model(nats: &BTreeSet<u64>, vars: &BTreeSet<String>) -> Result<Model> {
    let sig = Arc::new(crate::syntax::parse_signature(&memory_msig(nats, vars))?);
    let nat_list: Vec<u64> = nats.iter().copied().collect();
    let var_list: Vec<String> = vars.iter().cloned().collect();
    let mut mems: Pool<Memory> = Pool::new();
    mems.add(Memory::new());
    for x in &var_list {
        let current = mems.items.clone();
        for m in current {
            for n in &nat_list {
                let mut m2 = m.clone();
                m2.insert(x.clone(), *n);
                mems.add(m2);
            }
        }
    }
    let names = vec![
        nat_list.iter().map(|n| format!("nat_{n}")).collect(),
        var_list.iter().map(|x| format!("var_{x}")).collect(),
        (0..mems.items.len()).map(|i| format!("mem_{i}")).collect(),
    ];
    let mut frame = Frame::with_names(sig.clone(), names)?;
    for (i, n) in nat_list.iter().enumerate() {
        frame.add_tuple(sig.op_or_err(&n.to_string())?, &[i as World])?;
    }
    for (i, x) in var_list.iter().enumerate() {
        frame.add_tuple(sig.op_or_err(x)?, &[i as World])?;
    }
    let (empty, set, get) = (sig.op_or_err("empty")?, sig.op_or_err("set")?, sig.op_or_err("get")?);
    for (i, m) in mems.items.iter().enumerate() {
        let w = i as World;
        if m.is_empty() {
            frame.add_tuple(empty, &[w])?;
        }
        for (j, x) in var_list.iter().enumerate() {
            let value = m.get(x).copied().unwrap_or(0);
            if let Ok(k) = nat_list.binary_search(&value) {
                frame.add_tuple(get, &[w, j as World, k as World])?;
            }
            for (k, n) in nat_list.iter().enumerate() {
                let mut m2 = m.clone();
                m2.insert(x.clone(), *n);
                let target = mems.get(&m2).expect("memories are closed under writes");
                frame.add_tuple(set, &[target, w, j as World, k as World])?;
            }
        }
    }
    Ok(Model::new(frame))
}
