//! Signatures, formulas and their textual front end.

mod formula;
mod parse;
mod print;
mod random;
mod signature;

pub use formula::Formula;
pub use parse::{parse_formula, parse_formula_at};
pub(crate) use parse::split_top_level;
pub use print::print_formula;
pub use random::{random_formula, random_signature, SigShape};
pub use signature::{parse_signature, OpDecl, OpId, Signature, SignatureBuilder, Sort, SortId, Sym};
pub(crate) use signature::{ident, strip_comment};
