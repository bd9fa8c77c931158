//! A small expression language in the single variable `u`.
//!
//! Pressure laws supplied by users arrive as text such as `1/(1+u^2) + 0.5`.
//! [`parse`] turns that text into an [`Expr`], and [`Expr::eval2`] evaluates
//! the value together with the exact first and second derivatives using
//! second-order dual numbers ([`Dual2`]).
//!
//! Grammar, lowest to highest precedence:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' unary)?          (right associative)
//! atom  := number | 'u' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func  := 'ln' | 'exp' | 'sqrt' | 'abs'
//! ```
//!
//! So `-u^2` is `-(u^2)` and `2^3^2` is `2^(3^2)`. Implicit multiplication
//! (`2u`) is rejected.

mod ast;
mod dual;
mod parser;

pub use ast::{BinOp, Constant, Expr, Func};
pub use dual::Dual2;
pub use parser::parse;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: found {found}, expected one of {}", expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<String>,
    },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error at u = {u}: {reason} in `{subexpr}`")]
    Domain {
        u: f64,
        subexpr: String,
        reason: String,
    },
}
