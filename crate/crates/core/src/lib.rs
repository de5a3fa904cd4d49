//! A toolkit for many-sorted polyadic modal logic.
//!
//! * [`syntax`]: signatures, sorted formulas, uniform substitution and the text formats.
//! * [`semantics`]: finite sorted Kripke models, satisfaction, consequence, generated
//!   submodels and small-scope model enumeration.
//! * [`proof`]: the Hilbert-style checker for normal modal logics `KΛ` in local and
//!   global mode, derived-rule generators and the deduction-theorem transformations.
//! * [`algebra`]: finite many-sorted boolean algebras with operators, complex algebras,
//!   ultrafilter frames and the Jónsson–Tarski embedding.
//! * [`smc`]: a dynamic-logic axiomatization of Plotkin's SMC machine, an interpreter,
//!   a finite term model and the machine-checked correctness proof of a small program.

pub mod algebra;
pub mod error;
pub mod proof;
pub mod semantics;
pub mod smc;
pub mod syntax;

pub use error::{Error, Result};
pub use syntax::{Formula, OpId, Signature, SortId, Sym};

/// Version of every text/structured format emitted by the toolkit.
pub const FORMAT_VERSION: &str = "1";
