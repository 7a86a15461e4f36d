//! Typed noncommutative rewriting that certifies the block identities behind
//! the pasting construction. No floating point is used here.

pub mod certify;
pub mod matrix;
pub mod parse;
pub mod rewrite;
pub mod scalar;
pub mod term;

pub use certify::{verify_homotopy, verify_homotopy_with, verify_proposition, verify_proposition_with, Certificate};
pub use matrix::{square_symbolic, SymMatrix};
pub use parse::{parse_term, parse_term_as};
pub use rewrite::{reduce, RewriteSystem, Rule};
pub use scalar::Scalar;
pub use term::{Letter, Space, Sym, Term};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymbolicError {
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("rule file line {line}: {message}")]
    Rule { line: usize, message: String },
    #[error("unknown axiom {0:?}")]
    UnknownAxiom(String),
    #[error("rewrite step limit {0} exceeded")]
    StepLimit(usize),
}
