//! Finite sorted Kripke models and the satisfaction relation.

mod enumerate;
mod eval;
mod model;
mod submodel;

pub use enumerate::{enumerate_models, find_countermodel, random_model, Countermodel, ModelEnumerator, MAX_SLOTS};
pub use eval::{failing_world, global_model_of, globally_true, local_consequence, satisfies, truth_set, Consequence};
pub use model::{parse_model, Frame, Model, World};
pub use submodel::{generated_submodel, Submodel};
