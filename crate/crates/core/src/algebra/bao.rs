use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::syntax::{OpId, Signature, SortId};

/// An element of a finite boolean algebra: a set of atoms, bit `i` for atom `i`.
pub type Elem = u64;

/// Largest number of atoms per sort.
pub const MAX_ATOMS: usize = 16;

/// Largest number of argument tuples in one operator table.
const MAX_TABLE: usize = 1 << 22;

/// A finite `(S,Σ)`-boolean algebra with operators. The algebra of sort `s` is the
/// powerset of its atoms; each `f_σ` is a total table over element tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bao {
    sig: Arc<Signature>,
    atoms: Vec<Vec<String>>,
    tables: Vec<Vec<Elem>>,
}

impl Bao {
    /// A bao whose operators are given element-wise by `f`.
    pub fn from_fn(
        sig: Arc<Signature>,
        atoms: Vec<Vec<String>>,
        mut f: impl FnMut(OpId, &[Elem]) -> Elem,
    ) -> Result<Bao> {
        if atoms.len() != sig.num_sorts() {
            return Err(Error::Algebra(format!(
                "expected atoms for {} sorts, got {}",
                sig.num_sorts(),
                atoms.len()
            )));
        }
        for s in sig.sorts() {
            let n = atoms[s.index()].len();
            if n == 0 || n > MAX_ATOMS {
                return Err(Error::Algebra(format!(
                    "sort `{}` needs between 1 and {MAX_ATOMS} atoms, got {n}",
                    sig.sort_name(s)
                )));
            }
        }
        let mut bao = Bao {
            sig: sig.clone(),
            atoms,
            tables: Vec::new(),
        };
        for op in sig.ops() {
            let size = bao.table_size(op)?;
            let top = bao.top(sig.op_decl(op).result_sort);
            let mut table = Vec::with_capacity(size);
            for i in 0..size {
                let args = bao.decode(op, i);
                let v = f(op, &args);
                if v & !top != 0 {
                    return Err(Error::Algebra(format!(
                        "table of `{}` yields a value outside its sort",
                        sig.op_decl(op).name
                    )));
                }
                table.push(v);
            }
            bao.tables.push(table);
        }
        Ok(bao)
    }

    /// A bao given on atom tuples only and completed additively:
    /// `f(X1, …, Xn) = ⋃ { f(a1, …, an) | ai ∈ Xi }`, empty when some `Xi` is.
    pub fn from_atom_tables(
        sig: Arc<Signature>,
        atoms: Vec<Vec<String>>,
        mut atom_fn: impl FnMut(OpId, &[usize]) -> Elem,
    ) -> Result<Bao> {
        let sizes: Vec<usize> = atoms.iter().map(Vec::len).collect();
        let mut atom_tables: Vec<Vec<(Vec<usize>, Elem)>> = Vec::new();
        for op in sig.ops() {
            let d = sig.op_decl(op);
            let radices: Vec<usize> = d.arg_sorts.iter().map(|s| sizes.get(s.index()).copied().unwrap_or(0)).collect();
            atom_tables.push(
                mixed_radix(&radices)
                    .map(|t| {
                        let v = atom_fn(op, &t);
                        (t, v)
                    })
                    .collect(),
            );
        }
        Bao::from_fn(sig, atoms, |op, args| {
            atom_tables[op.index()]
                .iter()
                .filter(|(t, _)| t.iter().zip(args).all(|(a, x)| x >> a & 1 == 1))
                .fold(0, |acc, (_, v)| acc | v)
        })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn num_atoms(&self, s: SortId) -> usize {
        self.atoms[s.index()].len()
    }

    pub fn atom_name(&self, s: SortId, a: usize) -> &str {
        &self.atoms[s.index()][a]
    }

    pub fn atom_names(&self) -> &[Vec<String>] {
        &self.atoms
    }

    /// Number of elements of sort `s`.
    pub fn num_elems(&self, s: SortId) -> usize {
        1 << self.num_atoms(s)
    }

    pub fn elems(&self, s: SortId) -> impl Iterator<Item = Elem> {
        0..self.num_elems(s) as Elem
    }

    pub fn top(&self, s: SortId) -> Elem {
        (1u64 << self.num_atoms(s)) - 1
    }

    pub fn complement(&self, s: SortId, a: Elem) -> Elem {
        !a & self.top(s)
    }

    fn table_size(&self, op: OpId) -> Result<usize> {
        let d = self.sig.op_decl(op);
        let mut size = 1usize;
        for s in &d.arg_sorts {
            size = size.saturating_mul(self.num_elems(*s));
        }
        if size > MAX_TABLE {
            return Err(Error::Algebra(format!(
                "the table of `{}` would have {size} entries",
                d.name
            )));
        }
        Ok(size)
    }

    fn index(&self, op: OpId, args: &[Elem]) -> usize {
        let d = self.sig.op_decl(op);
        let mut idx = 0usize;
        let mut scale = 1usize;
        for (a, s) in args.iter().zip(&d.arg_sorts) {
            idx += *a as usize * scale;
            scale *= self.num_elems(*s);
        }
        idx
    }

    fn decode(&self, op: OpId, mut idx: usize) -> Vec<Elem> {
        let d = self.sig.op_decl(op);
        d.arg_sorts
            .iter()
            .map(|s| {
                let n = self.num_elems(*s);
                let a = idx % n;
                idx /= n;
                a as Elem
            })
            .collect()
    }

    /// `f_σ(a1, …, an)`.
    pub fn apply(&self, op: OpId, args: &[Elem]) -> Elem {
        self.tables[op.index()][self.index(op, args)]
    }

    /// `f_σ□(a1, …, an) = ¬f_σ(¬a1, …, ¬an)`.
    pub fn apply_dual(&self, op: OpId, args: &[Elem]) -> Elem {
        let d = self.sig.op_decl(op);
        let negs: Vec<Elem> = args
            .iter()
            .zip(&d.arg_sorts)
            .map(|(a, s)| self.complement(*s, *a))
            .collect();
        self.complement(d.result_sort, self.apply(op, &negs))
    }

    /// Overwrites one table entry (used to plant defects in tests and fixtures).
    pub fn set_entry(&mut self, op: OpId, args: &[Elem], value: Elem) {
        let i = self.index(op, args);
        self.tables[op.index()][i] = value;
    }

    /// All argument tuples of `σ` in lexicographic order (first argument slowest).
    pub fn arg_tuples(&self, op: OpId) -> Vec<Vec<Elem>> {
        let d = self.sig.op_decl(op);
        let radices: Vec<usize> = d.arg_sorts.iter().map(|s| self.num_elems(*s)).collect();
        mixed_radix(&radices)
            .map(|t| t.into_iter().map(|a| a as Elem).collect())
            .collect()
    }

    /// Renders an element as `{a b}` with atom names.
    pub fn show(&self, s: SortId, a: Elem) -> String {
        let names: Vec<&str> = (0..self.num_atoms(s))
            .filter(|i| a >> i & 1 == 1)
            .map(|i| self.atoms[s.index()][i].as_str())
            .collect();
        format!("{{{}}}", names.join(" "))
    }
}

/// All tuples `t` with `t[i] < radices[i]`, first component slowest.
pub(crate) fn mixed_radix(radices: &[usize]) -> impl Iterator<Item = Vec<usize>> {
    let total: usize = radices.iter().product();
    let radices = radices.to_vec();
    (0..total).map(move |mut k| {
        let mut t = vec![0; radices.len()];
        for i in (0..radices.len()).rev() {
            t[i] = k % radices[i];
            k /= radices[i];
        }
        t
    })
}

/// Normality (N), additivity (A) or a boolean law, as reported by [`check_bao`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    /// `f(…, 0, …) = 0`.
    Normality,
    /// `f(…, a ∨ a', …) = f(…, a, …) ∨ f(…, a', …)`.
    Additivity,
    /// One of the boolean-algebra identities.
    Boolean,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Law::Normality => "normality (N)",
            Law::Additivity => "additivity (A)",
            Law::Boolean => "boolean law",
        })
    }
}

/// Outcome of [`check_bao`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaoVerdict {
    Ok,
    Violated {
        law: Law,
        /// Operation name, or the sort name for boolean laws.
        at: String,
        /// 1-based argument position for (N) and (A).
        pos: Option<usize>,
        /// The offending arguments; for (A) the last entry is the second summand `a'`.
        witness: Vec<Elem>,
    },
}

impl BaoVerdict {
    pub fn is_ok(&self) -> bool {
        *self == BaoVerdict::Ok
    }
}

/// Verifies (N) and (A) exhaustively over all argument tuples (first violation in
/// lexicographic order) and spot-checks the boolean laws on random triples.
pub fn check_bao<R: Rng + ?Sized>(bao: &Bao, rng: &mut R) -> BaoVerdict {
    let sig = bao.signature().clone();
    for op in sig.ops() {
        let d = sig.op_decl(op);
        let tuples = bao.arg_tuples(op);
        for (i, s) in d.arg_sorts.iter().enumerate() {
            for t in &tuples {
                if t[i] == 0 && bao.apply(op, t) != 0 {
                    return BaoVerdict::Violated {
                        law: Law::Normality,
                        at: d.name.to_string(),
                        pos: Some(i + 1),
                        witness: t.clone(),
                    };
                }
            }
            for t in &tuples {
                for b in bao.elems(*s) {
                    let mut u = t.clone();
                    u[i] = b;
                    let mut j = t.clone();
                    j[i] = t[i] | b;
                    if bao.apply(op, &j) != bao.apply(op, t) | bao.apply(op, &u) {
                        let mut witness = t.clone();
                        witness.push(b);
                        return BaoVerdict::Violated {
                            law: Law::Additivity,
                            at: d.name.to_string(),
                            pos: Some(i + 1),
                            witness,
                        };
                    }
                }
            }
        }
    }
    for s in sig.sorts() {
        let n = bao.num_elems(s) as Elem;
        let top = bao.top(s);
        let neg = |a: Elem| bao.complement(s, a);
        for _ in 0..100 {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            // join and meet are bitwise, so only the laws involving complement can fail
            let laws = [
                a | neg(a) == top,
                a & neg(a) == 0,
                neg(neg(a)) == a,
                neg(a | b) == neg(a) & neg(b),
                neg(a & c) == neg(a) | neg(c),
            ];
            if laws.iter().any(|ok| !ok) {
                return BaoVerdict::Violated {
                    law: Law::Boolean,
                    at: sig.sort_name(s).to_string(),
                    pos: None,
                    witness: vec![a, b, c],
                };
            }
        }
    }
    BaoVerdict::Ok
}

/// A random bao with `1 ≤ atoms ≤ max_atoms` per sort whose operators are random on
/// atom tuples (each result atom with probability `density`) and completed
/// additively, so (N) and (A) hold by construction.
pub fn random_bao<R: Rng + ?Sized>(
    sig: Arc<Signature>,
    max_atoms: usize,
    density: f64,
    rng: &mut R,
) -> Result<Bao> {
    let atoms: Vec<Vec<String>> = sig
        .sorts()
        .map(|s| {
            let n = rng.gen_range(1..=max_atoms.clamp(1, MAX_ATOMS));
            (0..n).map(|i| format!("{}_{i}", sig.sort_name(s))).collect()
        })
        .collect();
    let sizes: Vec<usize> = atoms.iter().map(Vec::len).collect();
    let sig2 = sig.clone();
    Bao::from_atom_tables(sig, atoms, |op, _| {
        let n = sizes[sig2.op_decl(op).result_sort.index()];
        (0..n).filter(|_| rng.gen_bool(density)).fold(0, |acc, i| acc | 1 << i)
    })
}
