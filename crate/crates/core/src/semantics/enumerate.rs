use std::sync::Arc;

use rand::Rng;

use super::eval::failing_world;
use super::model::{Frame, Model, World};
use crate::error::{Error, Result};
use crate::syntax::{Formula, OpId, Signature, SortId, Sym};

/// Largest number of free bits (relation tuples plus valuation entries) a single
/// world-count vector may contribute to an enumeration.
pub const MAX_SLOTS: usize = 40;

#[derive(Debug, Clone, Copy)]
enum Slot {
    Rel(OpId, usize),
    Val(usize, World),
}

/// Deterministic stream of all models with `1 ≤ |W_s| ≤ bound` for every sort, all
/// relations, and all valuations of the variables in the pool (other variables are
/// empty). Models are produced once per world-count vector and bit pattern, so
/// isomorphic copies do occur.
#[derive(Debug, Clone)]
pub struct ModelEnumerator {
    sig: Arc<Signature>,
    bound: usize,
    pool: Vec<(Sym, SortId)>,
    counts: Vec<usize>,
    tuples: Vec<Vec<Vec<World>>>,
    slots: Vec<Slot>,
    mask: u64,
    exhausted: bool,
}

/// Enumerates models over `sig`; see [`ModelEnumerator`].
pub fn enumerate_models(sig: Arc<Signature>, bound: usize, pool: &[Sym]) -> Result<ModelEnumerator> {
    if bound == 0 {
        return Err(Error::Enumeration("the world bound must be at least 1".into()));
    }
    let pool = pool
        .iter()
        .map(|v| {
            sig.var_sort(v)
                .map(|s| (v.clone(), s))
                .ok_or_else(|| Error::UnknownSymbol(v.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut e = ModelEnumerator {
        counts: vec![1; sig.num_sorts()],
        sig,
        bound,
        pool,
        tuples: Vec::new(),
        slots: Vec::new(),
        mask: 0,
        exhausted: false,
    };
    e.total()?;
    e.layout()?;
    Ok(e)
}

fn all_tuples(counts: &[usize], sorts: &[SortId]) -> Vec<Vec<World>> {
    let mut out = vec![Vec::new()];
    for s in sorts {
        let n = counts[s.index()];
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n as World).map(move |w| {
                    let mut t = t.clone();
                    t.push(w);
                    t
                })
            })
            .collect();
    }
    out
}

impl ModelEnumerator {
    fn layout(&mut self) -> Result<()> {
        let sig = &self.sig;
        self.tuples = sig
            .ops()
            .map(|op| {
                let d = sig.op_decl(op);
                let sorts: Vec<SortId> = std::iter::once(d.result_sort)
                    .chain(d.arg_sorts.iter().copied())
                    .collect();
                all_tuples(&self.counts, &sorts)
            })
            .collect();
        self.slots.clear();
        for op in sig.ops() {
            for i in 0..self.tuples[op.index()].len() {
                self.slots.push(Slot::Rel(op, i));
            }
        }
        for (i, (_, s)) in self.pool.iter().enumerate() {
            for w in 0..self.counts[s.index()] {
                self.slots.push(Slot::Val(i, w as World));
            }
        }
        if self.slots.len() > MAX_SLOTS {
            return Err(Error::Enumeration(format!(
                "{} free bits for world counts {:?} exceed the limit of {MAX_SLOTS}",
                self.slots.len(),
                self.counts
            )));
        }
        self.mask = 0;
        Ok(())
    }

    /// Number of models the full stream yields.
    pub fn total(&self) -> Result<u128> {
        let mut probe = self.clone();
        probe.counts = vec![1; self.sig.num_sorts()];
        let mut total = 0u128;
        loop {
            probe.layout()?;
            total += 1u128 << probe.slots.len();
            if !probe.advance_counts() {
                return Ok(total);
            }
        }
    }

    fn advance_counts(&mut self) -> bool {
        for c in self.counts.iter_mut() {
            if *c < self.bound {
                *c += 1;
                return true;
            }
            *c = 1;
        }
        false
    }

    fn build(&self) -> Model {
        let sizes = self.counts.clone();
        let mut frame = Frame::new(self.sig.clone(), &sizes).expect("counts are positive");
        let mut vals: Vec<Vec<World>> = vec![Vec::new(); self.pool.len()];
        for (bit, slot) in self.slots.iter().enumerate() {
            if self.mask >> bit & 1 == 0 {
                continue;
            }
            match *slot {
                Slot::Rel(op, i) => frame
                    .add_tuple(op, &self.tuples[op.index()][i])
                    .expect("enumerated tuples are well-sorted"),
                Slot::Val(v, w) => vals[v].push(w),
            }
        }
        let mut model = Model::new(frame);
        for ((v, _), ws) in self.pool.iter().zip(vals) {
            model.set_valuation(v, &ws).expect("pool variables are declared");
        }
        model
    }
}

impl Iterator for ModelEnumerator {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        if self.exhausted {
            return None;
        }
        let model = self.build();
        self.mask += 1;
        if self.mask >> self.slots.len() != 0 {
            if self.advance_counts() {
                if self.layout().is_err() {
                    self.exhausted = true;
                }
            } else {
                self.exhausted = true;
            }
        }
        Some(model)
    }
}

/// A random model with `1 ≤ |W_s| ≤ max_worlds`; each possible relation tuple is
/// present with probability `density`, each pool variable holds at each world with
/// probability 1/2.
pub fn random_model<R: Rng + ?Sized>(
    sig: Arc<Signature>,
    max_worlds: usize,
    pool: &[Sym],
    density: f64,
    rng: &mut R,
) -> Result<Model> {
    if max_worlds == 0 {
        return Err(Error::Enumeration("the world bound must be at least 1".into()));
    }
    let counts: Vec<usize> = sig.sorts().map(|_| rng.gen_range(1..=max_worlds)).collect();
    let mut frame = Frame::new(sig.clone(), &counts)?;
    for op in sig.ops() {
        let d = sig.op_decl(op);
        let sorts: Vec<SortId> = std::iter::once(d.result_sort)
            .chain(d.arg_sorts.iter().copied())
            .collect();
        for t in all_tuples(&counts, &sorts) {
            if rng.gen_bool(density) {
                frame.add_tuple(op, &t)?;
            }
        }
    }
    let mut model = Model::new(frame);
    for v in pool {
        let s = sig
            .var_sort(v)
            .ok_or_else(|| Error::UnknownSymbol(v.to_string()))?;
        let ws: Vec<World> = (0..counts[s.index()] as World)
            .filter(|_| rng.gen_bool(0.5))
            .collect();
        model.set_valuation(v, &ws)?;
    }
    Ok(model)
}

/// A model and world refuting a formula.
#[derive(Debug, Clone)]
pub struct Countermodel {
    pub model: Model,
    pub world: World,
    /// Position of the model in the enumeration stream.
    pub index: usize,
}

/// Searches all models up to `bound` worlds per sort (valuations over the
/// variables of `phi`) for one where `phi` fails somewhere.
pub fn find_countermodel(sig: Arc<Signature>, phi: &Formula, bound: usize) -> Result<Option<Countermodel>> {
    sig.sort_of(phi)?;
    let pool: Vec<Sym> = phi.vars().into_iter().collect();
    for (index, model) in enumerate_models(sig, bound, &pool)?.enumerate() {
        if let Some(world) = failing_world(&model, phi)? {
            return Ok(Some(Countermodel { model, world, index }));
        }
    }
    Ok(None)
}
