//! Hilbert-style proofs for normal modal logics `KΛ`.

mod builder;
mod check;
mod closure;
mod derive;
mod io;
mod random;
mod scheme;
mod taut;
mod transform;

pub use builder::{prune, ProofBuilder};
pub use check::{check_proof, insert_at, Justification, Mode, Proof, ProofStep, Verdict};
pub use derive::{
    box_conj, box_conj_intro, box_cong, box_mono, cong, derive_box_conj, derive_cong, derive_dia_disj,
    derive_mono, dia_disj, dia_mono, taut_proof,
};
pub use closure::gamma_closure;
pub use io::{parse_formula_list, parse_proof, write_justification, write_proof};
pub use random::{random_global_proof, ProofShape};
pub use scheme::{
    add_instance, binding, check_guard, dual_instance, dual_metavars, is_ground_term, k_binding, k_instance,
    k_metavars, norm_instance, numeral, parse_axioms, side_binding, AxiomScheme, AxiomSet, Basis, Binding, Guard,
    GuardKind,
};
pub use taut::{taut_check, MAX_ATOMS};
pub use transform::{
    dt_global, dt_local, dt_local_inverse, gamma_g_chain, globalize, GammaChain, GlobalDeduction, Globalized, Layer,
};
