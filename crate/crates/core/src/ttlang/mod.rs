//! A small extensional type theory with `Unit`, `Prod`, `Eq`, `Sigma` and
//! `Pi`, interpreted into a comprehension category. Judgmental equality is
//! decided in the model: two terms are equal iff their sections are.

mod interp;
mod syntax;

use serde::Serialize;
use thiserror::Error;

pub use interp::{
    check_equal, interpret, interpret_source, Denotation, Entry, EqInstance, Interpretation, Model, SigmaInstance,
    SubstComparison,
};
pub use syntax::{parse, CtxRef, Decl, Pos, Telescope, TermExpr, TypeExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeErrorKind {
    NotASection,
    FormerUnavailable,
    TypeMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum TTError {
    #[error("{line}:{col}: syntax error, expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("{line}:{col}: unbound name `{name}`")]
    Unbound { name: String, line: usize, col: usize },
    #[error("{location}: {kind:?}: {detail}")]
    Type { kind: TypeErrorKind, location: String, detail: String },
    #[error("model is not usable: {0}")]
    Model(String),
}

impl TTError {
    pub(crate) fn ty(kind: TypeErrorKind, detail: impl Into<String>) -> Self {
        TTError::Type { kind, location: String::new(), detail: detail.into() }
    }
}
