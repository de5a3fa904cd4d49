//! Finite many-sorted boolean algebras with operators, complex algebras of frames,
//! ultrafilter frames and the Jónsson–Tarski embedding.

mod bao;
mod complex;
mod io;
mod jt;

pub use bao::{check_bao, random_bao, Bao, BaoVerdict, Elem, Law, MAX_ATOMS};
pub use complex::{complex_algebra, complex_dual, eval, model_assignment, Assignment};
pub use io::{parse_bao, write_bao};
pub use jt::{embed, jt_embedding, ultrafilter_frame, ultrafilters, JtCheck, JtReport, JtVerdict, Ultrafilter};
