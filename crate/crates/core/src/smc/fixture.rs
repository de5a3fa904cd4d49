//! The SMC signature and its axiom schemes.

use std::collections::BTreeSet;

use super::lang::{AExp, BExp, Stmt};
use super::machine::{Ctrl, Value};
use crate::error::{Error, Result};
use crate::proof::{parse_axioms, AxiomSet};
use crate::syntax::{parse_signature, Formula, Signature};

/// The running example of the correctness proof.
pub const PGM_SOURCE: &str = "i1 := 1; i2 := 2; if i1 <= i2 then m := i1 else m := i2";

/// Naturals and program variables of [`smc_signature`].
pub const DEFAULT_NATS: [u64; 5] = [0, 1, 2, 3, 4];
pub const DEFAULT_VARS: [&str; 3] = ["i1", "i2", "m"];

const SORTS: [&str; 11] = [
    "Nat", "Var", "Bool", "AExp", "BExp", "Stmt", "Val", "ValStack", "Mem", "CtrlStack", "Config",
];

const OPS: &str = "\
op true : -> Bool
op false : -> Bool
op num : Nat -> AExp
op id : Var -> AExp
op add : AExp AExp -> AExp
op le : AExp AExp -> BExp
op assign : Var AExp -> Stmt
op ite : BExp Stmt Stmt -> Stmt
op while : BExp Stmt -> Stmt
op skip : -> Stmt
op sseq : Stmt Stmt -> Stmt
op vnat : Nat -> Val
op vbool : Bool -> Val
op nil : -> ValStack
op cons : Val ValStack -> ValStack
op empty : -> Mem
op set : Mem Var Nat -> Mem
op get : Var Nat -> Mem
op ca : AExp -> CtrlStack
op cb : BExp -> CtrlStack
op cs : Stmt -> CtrlStack
op asgn : Var -> CtrlStack
op plus : -> CtrlStack
op leq : -> CtrlStack
op test : Val -> CtrlStack
op seq : CtrlStack CtrlStack -> CtrlStack
op choice : CtrlStack CtrlStack -> CtrlStack
op star : CtrlStack -> CtrlStack
op config : ValStack Mem -> Config
op exec : CtrlStack Config -> Config
";

const VARS: [(&str, &str); 11] = [
    ("nv", "Nat"),
    ("xv", "Var"),
    ("tv", "Bool"),
    ("av", "AExp"),
    ("bv", "BExp"),
    ("sv", "Stmt"),
    ("val", "Val"),
    ("vs", "ValStack"),
    ("mem", "Mem"),
    ("pi", "CtrlStack"),
    ("gamma", "Config"),
];

/// `.msig` text of the SMC signature with the given numerals and program variables.
pub fn smc_msig(nats: &BTreeSet<u64>, vars: &BTreeSet<String>) -> String {
    let mut out = String::new();
    for s in SORTS {
        out.push_str(&format!("sort {s}\n"));
    }
    for n in nats {
        out.push_str(&format!("op {n} : -> Nat\n"));
    }
    for x in vars {
        out.push_str(&format!("op {x} : -> Var\n"));
    }
    out.push_str(OPS);
    for (v, s) in VARS {
        out.push_str(&format!("var {v} : {s}\n"));
    }
    out
}

/// The SMC signature over the given numerals and program variables.
pub fn smc_signature_with(nats: &BTreeSet<u64>, vars: &BTreeSet<String>) -> Result<Signature> {
    for x in vars {
        if !x.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            return Err(Error::Smc(format!("`{x}` cannot name a program variable")));
        }
    }
    parse_signature(&smc_msig(nats, vars)).map_err(|e| match e {
        Error::Signature(msg) => Error::Smc(format!("program variables clash with the fixture: {msg}")),
        e => e,
    })
}

/// The SMC signature over [`DEFAULT_NATS`] and [`DEFAULT_VARS`].
pub fn smc_signature() -> Signature {
    let nats = DEFAULT_NATS.into_iter().collect();
    let vars = DEFAULT_VARS.iter().map(|s| s.to_string()).collect();
    smc_signature_with(&nats, &vars).expect("the fixture signature is well formed")
}

/// How `[π]γ` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoxReading {
    /// `¬exec(π, ¬γ)`: all `π`-successors satisfy `γ`.
    #[default]
    Pdl,
    /// The dual operator applied verbatim: `¬exec(¬π, ¬γ)`.
    Literal,
}

impl BoxReading {
    /// Text of `[p]g` under this reading.
    pub fn text(self, p: &str, g: &str) -> String {
        match self {
            BoxReading::Pdl => format!("!exec({p}, !{g})"),
            BoxReading::Literal => format!("[exec]({p}, {g})"),
        }
    }

    pub fn formula(self, p: Formula, g: Formula) -> Formula {
        match self {
            BoxReading::Pdl => Formula::app("exec", [p, g.not()]).not(),
            BoxReading::Literal => Formula::dual("exec", [p, g]),
        }
    }
}

/// `.max` text of the SMC axioms.
pub fn smc_max(reading: BoxReading) -> String {
    let bx = |p: &str, g: &str| reading.text(p, g);
    let c = "meta P : CtrlStack meta P2 : CtrlStack meta G : Config";
    let cfg = "meta VS : ValStack meta M : Mem";
    let lines = [
        format!("scheme Achoice {c} ::= {} <-> {} & {}", bx("choice(P, P2)", "G"), bx("P", "G"), bx("P2", "G")),
        format!("scheme Aseq {c} ::= {} <-> {}", bx("seq(P, P2)", "G"), bx("P", &bx("P2", "G"))),
        format!(
            "scheme Astar meta P : CtrlStack meta G : Config ::= {} <-> G & {}",
            bx("star(P)", "G"),
            bx("P", &bx("star(P)", "G"))
        ),
        format!(
            "scheme Atest meta V : Val {cfg} ::= config(cons(V, VS), M) -> {}",
            bx("test(V)", "config(VS, M)")
        ),
        format!(
            "scheme Antest meta V : Val meta V2 : Val {cfg} meta G : Config guard distinct(V, V2) ::= \
             config(cons(V, VS), M) -> {}",
            bx("test(V2)", "G")
        ),
        "scheme CStmt meta S1 : Stmt meta S2 : Stmt ::= cs(sseq(S1, S2)) <-> seq(cs(S1), cs(S2))".into(),
        "scheme AMem0 meta X : Var ::= empty -> get(X, 0)".into(),
        "scheme AMem1 meta M : Mem meta X : Var meta N : Nat ::= set(M, X, N) -> get(X, N)".into(),
        "scheme AMem2 meta M : Mem meta X : Var meta N : Nat meta Y : Var meta N2 : Nat guard distinct(X, Y) ::= \
         set(set(M, X, N), Y, N2) <-> set(set(M, Y, N2), X, N)"
            .into(),
        "scheme AMem3 meta M : Mem meta X : Var meta N : Nat meta N2 : Nat ::= \
         set(set(M, X, N), X, N2) <-> set(M, X, N2)"
            .into(),
        format!(
            "scheme Aint {cfg} meta N : Nat guard nat(N) ::= config(VS, M) -> {}",
            bx("ca(num(N))", "config(cons(vnat(N), VS), M)")
        ),
        format!(
            "scheme Aid {cfg} meta X : Var meta N : Nat ::= config(VS, set(M, X, N)) -> {}",
            bx("ca(id(X))", "config(cons(vnat(N), VS), set(M, X, N))")
        ),
        "scheme Dplus meta A1 : AExp meta A2 : AExp ::= ca(add(A1, A2)) <-> seq(ca(A1), seq(ca(A2), plus))".into(),
        format!(
            "scheme Aplus {cfg} meta N : Nat meta N1 : Nat meta N2 : Nat guard intadd(N, N1, N2) ::= \
             config(cons(vnat(N2), cons(vnat(N1), VS)), M) -> {}",
            bx("plus", "config(cons(vnat(N), VS), M)")
        ),
        "scheme Dleq meta A1 : AExp meta A2 : AExp ::= cb(le(A1, A2)) <-> seq(ca(A2), seq(ca(A1), leq))".into(),
        format!(
            "scheme Aleq {cfg} meta T : Bool meta N1 : Nat meta N2 : Nat guard leqtruth(T, N1, N2) ::= \
             config(cons(vnat(N1), cons(vnat(N2), VS)), M) -> {}",
            bx("leq", "config(cons(vbool(T), VS), M)")
        ),
        format!("scheme Askip meta G : Config ::= G -> {}", bx("cs(skip)", "G")),
        "scheme Dasgn meta X : Var meta A : AExp ::= cs(assign(X, A)) <-> seq(ca(A), asgn(X))".into(),
        format!(
            "scheme Aasgn meta N : Nat {cfg} meta X : Var ::= config(cons(vnat(N), VS), M) -> {}",
            bx("asgn(X)", "config(VS, set(M, X, N))")
        ),
        "scheme Dif meta B : BExp meta S1 : Stmt meta S2 : Stmt ::= cs(ite(B, S1, S2)) <-> \
         seq(cb(B), choice(seq(test(vbool(true)), cs(S1)), seq(test(vbool(false)), cs(S2))))"
            .into(),
        "scheme Dwhile meta B : BExp meta S : Stmt ::= cs(while(B, S)) <-> \
         seq(cb(B), seq(star(seq(test(vbool(true)), seq(cs(S), cb(B)))), test(vbool(false))))"
            .into(),
    ];
    let mut out = String::from("basis standard\n");
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

/// The PDL- and SMC-inspired axiom schemes over `sig`.
pub fn smc_axioms_for(sig: &Signature, reading: BoxReading) -> Result<AxiomSet> {
    parse_axioms(sig, &smc_max(reading))
}

/// The axioms over [`smc_signature`] under the PDL reading of boxes.
pub fn smc_axioms() -> AxiomSet {
    smc_axioms_for(&smc_signature(), BoxReading::Pdl).expect("the fixture axioms are well formed")
}

// ---- embedding machine objects as terms ------------------------------------

pub fn nat_term(n: u64) -> Formula {
    Formula::constant(&n.to_string())
}

pub fn aexp_term(a: &AExp) -> Formula {
    match a {
        AExp::Num(n) => Formula::app("num", [nat_term(*n)]),
        AExp::Var(x) => Formula::app("id", [Formula::constant(x)]),
        AExp::Add(a, b) => Formula::app("add", [aexp_term(a), aexp_term(b)]),
    }
}

pub fn bexp_term(b: &BExp) -> Formula {
    let BExp::Le(a1, a2) = b;
    Formula::app("le", [aexp_term(a1), aexp_term(a2)])
}

pub fn stmt_term(s: &Stmt) -> Formula {
    match s {
        Stmt::Assign(x, a) => Formula::app("assign", [Formula::constant(x), aexp_term(a)]),
        Stmt::If(b, s1, s2) => Formula::app("ite", [bexp_term(b), stmt_term(s1), stmt_term(s2)]),
        Stmt::While(b, s) => Formula::app("while", [bexp_term(b), stmt_term(s)]),
        Stmt::Skip => Formula::constant("skip"),
        Stmt::Seq(a, b) => Formula::app("sseq", [stmt_term(a), stmt_term(b)]),
    }
}

pub fn value_term(v: &Value) -> Formula {
    match v {
        Value::Nat(n) => Formula::app("vnat", [nat_term(*n)]),
        Value::Bool(b) => Formula::app("vbool", [Formula::constant(if *b { "true" } else { "false" })]),
    }
}

/// `v1 · v2 · … · base`, with `stack[0]` on top.
pub fn stack_term(stack: &[Value], base: Formula) -> Formula {
    stack
        .iter()
        .rev()
        .fold(base, |acc, v| Formula::app("cons", [value_term(v), acc]))
}

pub fn ctrl_term(c: &Ctrl) -> Formula {
    match c {
        Ctrl::A(a) => Formula::app("ca", [aexp_term(a)]),
        Ctrl::B(b) => Formula::app("cb", [bexp_term(b)]),
        Ctrl::S(s) => Formula::app("cs", [stmt_term(s)]),
        Ctrl::Asgn(x) => Formula::app("asgn", [Formula::constant(x)]),
        Ctrl::Plus => Formula::constant("plus"),
        Ctrl::Leq => Formula::constant("leq"),
        Ctrl::Test(v) => Formula::app("test", [value_term(v)]),
        Ctrl::Seq(a, b) => Formula::app("seq", [ctrl_term(a), ctrl_term(b)]),
        Ctrl::Choice(a, b) => Formula::app("choice", [ctrl_term(a), ctrl_term(b)]),
        Ctrl::Star(a) => Formula::app("star", [ctrl_term(a)]),
    }
}
