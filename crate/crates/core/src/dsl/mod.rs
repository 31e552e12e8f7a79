//! A small text format for ring presentations and evaluations.
//!
//! ```text
//! gen x: 2; gen y: 2;
//! rel x^2 = 0; rel y^2 = -x*y;
//! top 4;
//! integral x*y = 1;
//! eval integrate((x + y)^2);
//! ```
//!
//! Built-in spaces replace hand-written declarations: `space wbar();`.

pub mod ast;
mod eval;
mod lexer;
mod parser;

use thiserror::Error;

pub use ast::{Expr, Pos, Program, Stmt, StmtKind};
pub use eval::{eval_program, Value};
pub use parser::parse;

use crate::error::Error as KernelError;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DslError {
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax { pos: Pos, expected: String, found: String },
    #[error("{pos}: unknown identifier `{name}`")]
    UnknownIdentifier { pos: Pos, name: String },
    #[error("{pos}: relation for `{lhs}` has a term of degree {found}, expected {expected}")]
    DegreeMismatch { pos: Pos, lhs: String, expected: u32, found: u32 },
    #[error("{pos}: generator `{name}` has degree {degree}; degrees must be positive and even")]
    BadDegree { pos: Pos, name: String, degree: u32 },
    #[error("{pos}: {message}")]
    Type { pos: Pos, message: String },
    #[error("{pos}: no ring is in scope")]
    NoRing { pos: Pos },
    #[error("{pos}: {source}")]
    Kernel { pos: Pos, source: KernelError },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Syntax { pos, .. }
            | DslError::UnknownIdentifier { pos, .. }
            | DslError::DegreeMismatch { pos, .. }
            | DslError::BadDegree { pos, .. }
            | DslError::Type { pos, .. }
            | DslError::NoRing { pos }
            | DslError::Kernel { pos, .. } => *pos,
        }
    }
}

/// Parses and evaluates in one go.
pub fn run(text: &str) -> Result<Report, DslError> {
    eval_program(&parse(text)?)
}
