//! The SMC machine as a many-sorted dynamic logic: the signature and axioms, the
//! source language, an interpreter, a finite term model and execution proofs.

mod elaborate;
mod fixture;
mod lang;
mod machine;
mod term_model;

pub use elaborate::{
    delete_step, elaborate_execution, elaborate_pgm_proof, mem_get_theorem, pgm_final_memory, pgm_goal,
    pgm_reference_steps, pgm_step_map, ExecutionProof,
};
pub use fixture::{
    aexp_term, bexp_term, ctrl_term, nat_term, smc_axioms, smc_axioms_for, smc_max, smc_msig, smc_signature,
    smc_signature_with, stack_term, stmt_term, value_term, BoxReading, DEFAULT_NATS, DEFAULT_VARS, PGM_SOURCE,
};
pub use lang::{parse_program, AExp, BExp, Stmt};
pub use machine::{
    explore, parse_memory, show_mem, show_stack, smc_run, smc_step, Config, Ctrl, Exploration, Memory, Mode,
    RunOutcome, Value, DEFAULT_BUDGET,
};
pub use term_model::{
    build_term_model, coherence, memory_model, memory_msig, world_counts, CoherenceReport, SchemeReport, TermModel,
};
