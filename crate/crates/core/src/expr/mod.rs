//! A small arithmetic expression language for user-defined fields.
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := "-" factor | power
//! power  := atom ("^" factor)?
//! atom   := NUMBER | "x_" INDEX | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! `norm(x)` with the bare identifier `x` is the Euclidean norm of the whole
//! input vector; `norm(a, b, ...)` is the norm of its arguments.

mod ast;
mod bind;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use ast::{BinOp, Expr, ExprKind, Func};
pub use bind::{bind, eval_expr};
pub use parser::parse;

/// Byte range in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprErrorKind {
    Lexical,
    Syntax,
    UnknownFunction,
    Arity,
    IndexOutOfRange,
}

impl fmt::Display for ExprErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Lexical => "lexical error",
            Self::Syntax => "syntax error",
            Self::UnknownFunction => "unknown function",
            Self::Arity => "wrong number of arguments",
            Self::IndexOutOfRange => "variable index out of range",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {}: {message}", span.start)]
pub struct ExprError {
    pub kind: ExprErrorKind,
    pub message: String,
    pub span: Span,
}

impl ExprError {
    pub(crate) fn new(kind: ExprErrorKind, span: Span, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
            span,
        }
    }

    pub fn offset(&self) -> usize {
        self.span.start
    }
}
