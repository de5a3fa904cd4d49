use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::syntax::{ident, strip_comment, OpId, Signature, SortId, Sym};

/// A world, identified by its index inside the world set of its sort.
pub type World = u32;

/// A finite `(S,Σ)`-frame: nonempty world sets per sort and one relation per
/// operation symbol, stored as argument tuples grouped by their first component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    sig: Arc<Signature>,
    names: Vec<Vec<String>>,
    // rels[op][w] = sorted list of (w1, …, wn) with R_σ w w1 … wn
    rels: Vec<Vec<Vec<Box<[World]>>>>,
}

impl Frame {
    /// A frame with `sizes[s]` worlds at each sort and empty relations. Worlds get
    /// default names `<sort>_<i>`.
    pub fn new(sig: Arc<Signature>, sizes: &[usize]) -> Result<Frame> {
        let names = sig
            .sorts()
            .map(|s| {
                let n = sizes.get(s.index()).copied().unwrap_or(0);
                (0..n)
                    .map(|i| format!("{}_{i}", sig.sort_name(s)))
                    .collect()
            })
            .collect();
        Frame::with_names(sig, names)
    }

    /// A frame with the given world names per sort and empty relations.
    pub fn with_names(sig: Arc<Signature>, names: Vec<Vec<String>>) -> Result<Frame> {
        if names.len() != sig.num_sorts() {
            return Err(Error::Model(format!(
                "expected world sets for {} sorts, got {}",
                sig.num_sorts(),
                names.len()
            )));
        }
        for s in sig.sorts() {
            if names[s.index()].is_empty() {
                return Err(Error::Model(format!(
                    "sort `{}` has no worlds",
                    sig.sort_name(s)
                )));
            }
        }
        let rels = sig
            .ops()
            .map(|op| vec![Vec::new(); names[sig.op_decl(op).result_sort.index()].len()])
            .collect();
        Ok(Frame { sig, names, rels })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn num_worlds(&self, s: SortId) -> usize {
        self.names[s.index()].len()
    }

    pub fn worlds(&self, s: SortId) -> std::ops::Range<World> {
        0..self.num_worlds(s) as World
    }

    pub fn world_name(&self, s: SortId, w: World) -> &str {
        &self.names[s.index()][w as usize]
    }

    pub fn find_world(&self, name: &str) -> Option<(SortId, World)> {
        self.sig.sorts().find_map(|s| {
            self.names[s.index()]
                .iter()
                .position(|n| n == name)
                .map(|i| (s, i as World))
        })
    }

    /// Adds `R_σ w w1 … wn`; `tuple = [w, w1, …, wn]`.
    pub fn add_tuple(&mut self, op: OpId, tuple: &[World]) -> Result<()> {
        let decl = self.sig.op_decl(op);
        if tuple.len() != decl.arity() + 1 {
            return Err(Error::Model(format!(
                "relation of `{}` needs {} components, got {}",
                decl.name,
                decl.arity() + 1,
                tuple.len()
            )));
        }
        let sorts = std::iter::once(decl.result_sort).chain(decl.arg_sorts.iter().copied());
        for (w, s) in tuple.iter().zip(sorts) {
            if *w as usize >= self.num_worlds(s) {
                return Err(Error::Model(format!(
                    "world {w} out of range for sort `{}` in relation of `{}`",
                    self.sig.sort_name(s),
                    decl.name
                )));
            }
        }
        let list = &mut self.rels[op.index()][tuple[0] as usize];
        let args: Box<[World]> = tuple[1..].into();
        if let Err(at) = list.binary_search(&args) {
            list.insert(at, args);
        }
        Ok(())
    }

    /// Argument tuples `(w1, …, wn)` with `R_σ w w1 … wn`.
    pub fn successors(&self, op: OpId, w: World) -> &[Box<[World]>] {
        &self.rels[op.index()][w as usize]
    }

    /// All tuples `[w, w1, …, wn]` of `R_σ`, in lexicographic order.
    pub fn tuples(&self, op: OpId) -> impl Iterator<Item = Vec<World>> + '_ {
        self.rels[op.index()].iter().enumerate().flat_map(|(w, args)| {
            args.iter().map(move |a| {
                let mut t = Vec::with_capacity(a.len() + 1);
                t.push(w as World);
                t.extend_from_slice(a);
                t
            })
        })
    }

    pub fn num_tuples(&self, op: OpId) -> usize {
        self.rels[op.index()].iter().map(Vec::len).sum()
    }
}

/// A finite `(S,Σ)`-model: a frame together with a sorted valuation. Variables
/// without an explicit entry are interpreted as the empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub frame: Frame,
    val: BTreeMap<Sym, FixedBitSet>,
}

impl Model {
    pub fn new(frame: Frame) -> Model {
        Model {
            frame,
            val: BTreeMap::new(),
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.frame.signature()
    }

    pub fn set_valuation(&mut self, var: &str, worlds: &[World]) -> Result<()> {
        let sig = self.frame.signature().clone();
        let (sym, s) = sig
            .all_vars()
            .find(|(v, _)| &***v == var)
            .map(|(v, s)| (v.clone(), s))
            .ok_or_else(|| Error::UnknownSymbol(var.to_string()))?;
        let n = self.frame.num_worlds(s);
        let mut set = FixedBitSet::with_capacity(n);
        for &w in worlds {
            if w as usize >= n {
                return Err(Error::Model(format!(
                    "world {w} out of range for sort `{}` in valuation of `{var}`",
                    sig.sort_name(s)
                )));
            }
            set.insert(w as usize);
        }
        if set.count_ones(..) == 0 {
            self.val.remove(&sym);
        } else {
            self.val.insert(sym, set);
        }
        Ok(())
    }

    /// `ρ(p)` as a bit set over the worlds of `p`'s sort.
    pub fn valuation(&self, var: &str) -> Result<FixedBitSet> {
        let s = self
            .signature()
            .var_sort(var)
            .ok_or_else(|| Error::UnknownSymbol(var.to_string()))?;
        Ok(self
            .val
            .get(var)
            .cloned()
            .unwrap_or_else(|| FixedBitSet::with_capacity(self.frame.num_worlds(s))))
    }

    /// Renders the model in `.mmod` syntax.
    pub fn to_mmod(&self) -> String {
        let sig = self.signature();
        let f = &self.frame;
        let mut out = String::new();
        for s in sig.sorts() {
            for w in f.worlds(s) {
                let _ = writeln!(out, "world {} : {}", f.world_name(s, w), sig.sort_name(s));
            }
        }
        for op in sig.ops() {
            let decl = sig.op_decl(op);
            for t in f.tuples(op) {
                let _ = write!(out, "rel {} {}", decl.name, f.world_name(decl.result_sort, t[0]));
                for (w, s) in t[1..].iter().zip(&decl.arg_sorts) {
                    let _ = write!(out, " {}", f.world_name(*s, *w));
                }
                out.push('\n');
            }
        }
        for (v, set) in &self.val {
            if set.count_ones(..) == 0 {
                continue;
            }
            let s = sig.var_sort(v).expect("valuation keys are declared variables");
            let names: Vec<&str> = set.ones().map(|w| f.world_name(s, w as World)).collect();
            let _ = writeln!(out, "val {v} = {{ {} }}", names.join(" "));
        }
        out
    }
}

/// Parses the `.mmod` format:
///
/// ```text
/// world <id> : <sort>
/// rel <op> <id> <id>*
/// val <var> = { <id>* }
/// ```
///
/// World names are unique across all sorts.
pub fn parse_model(sig: Arc<Signature>, text: &str) -> Result<Model> {
    struct Pending<'t> {
        line: usize,
        kind: &'t str,
        rest: &'t str,
    }
    let mut names: Vec<Vec<String>> = vec![Vec::new(); sig.num_sorts()];
    let mut index: HashMap<String, (SortId, World)> = HashMap::new();
    let mut later = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        let (kind, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match kind {
            "world" => {
                let (name, sort) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::syntax(lineno, 1, "expected `world <id> : <sort>`"))?;
                let name = ident(name.trim())
                    .ok_or_else(|| Error::syntax(lineno, 7, format!("bad world name `{}`", name.trim())))?;
                let s = sig.sort_or_err(sort.trim())?;
                if index.contains_key(name) {
                    return Err(Error::Model(format!("duplicate world `{name}`")));
                }
                let w = names[s.index()].len() as World;
                names[s.index()].push(name.to_string());
                index.insert(name.to_string(), (s, w));
            }
            "rel" | "val" => later.push(Pending {
                line: lineno,
                kind,
                rest: rest.trim(),
            }),
            other => return Err(Error::syntax(lineno, 1, format!("unknown declaration `{other}`"))),
        }
    }
    let frame = Frame::with_names(sig.clone(), names)?;
    let mut model = Model::new(frame);
    let lookup = |name: &str, want: SortId| -> Result<World> {
        match index.get(name) {
            Some(&(s, w)) if s == want => Ok(w),
            Some(&(s, _)) => Err(Error::Model(format!(
                "world `{name}` has sort `{}`, expected `{}`",
                sig.sort_name(s),
                sig.sort_name(want)
            ))),
            None => Err(Error::Model(format!("undeclared world `{name}`"))),
        }
    };
    for p in later {
        match p.kind {
            "rel" => {
                let mut parts = p.rest.split_whitespace();
                let op_name = parts
                    .next()
                    .ok_or_else(|| Error::syntax(p.line, 1, "expected `rel <op> <id>*`"))?;
                let op = sig.op_or_err(op_name)?;
                let decl = sig.op_decl(op);
                let ids: Vec<&str> = parts.collect();
                if ids.len() != decl.arity() + 1 {
                    return Err(Error::Model(format!(
                        "line {}: relation of `{op_name}` needs {} worlds, got {}",
                        p.line,
                        decl.arity() + 1,
                        ids.len()
                    )));
                }
                let sorts = std::iter::once(decl.result_sort).chain(decl.arg_sorts.iter().copied());
                let tuple = ids
                    .iter()
                    .zip(sorts)
                    .map(|(id, s)| lookup(id, s))
                    .collect::<Result<Vec<_>>>()?;
                model.frame.add_tuple(op, &tuple)?;
            }
            _ => {
                let (var, set) = p
                    .rest
                    .split_once('=')
                    .ok_or_else(|| Error::syntax(p.line, 1, "expected `val <var> = { <id>* }`"))?;
                let var = var.trim();
                let s = sig
                    .var_sort(var)
                    .ok_or_else(|| Error::UnknownSymbol(var.to_string()))?;
                let set = set.trim();
                let inner = set
                    .strip_prefix('{')
                    .and_then(|x| x.strip_suffix('}'))
                    .ok_or_else(|| Error::syntax(p.line, 1, "expected `{ … }`"))?;
                let worlds = inner
                    .split_whitespace()
                    .map(|id| lookup(id, s))
                    .collect::<Result<Vec<_>>>()?;
                model.set_valuation(var, &worlds)?;
            }
        }
    }
    Ok(model)
}
