use std::fmt;

/// Location of a syntax error inside a source text (1-based line and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("signature error: {0}")]
    Signature(String),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("scheme error: {0}")]
    Scheme(String),
    #[error("guard `{guard}` failed: {msg}")]
    Guard { guard: String, msg: String },
    #[error("proof error: {0}")]
    Proof(String),
    #[error("algebra error: {0}")]
    Algebra(String),
    #[error("tautology check: {0}")]
    TooManyAtoms(String),
    #[error("smc: {0}")]
    Smc(String),
    #[error("enumeration: {0}")]
    Enumeration(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos: Pos { line, col },
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
