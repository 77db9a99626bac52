//! Closed-form expressions in the single variable `x` on `[0, 1]`.
//!
//! Supported syntax: numbers (`2`, `0.5`, `1e-3`), the variable `x`, the constants `e` and
//! `pi`, the operators `+ - * / ^` and the functions `exp ln sin cos tan abs sqrt cbrt`.
//! A power whose exponent is a literal number or literal quotient, e.g. `(x-1/2)^(2/3)`,
//! takes the real root of a negative base when the reduced denominator is odd.

mod ast;
mod lexer;
mod parser;

pub use ast::{Expr, Func, NamedConst, Rational};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

/// Interior breakpoints of `expr`; see [`Expr::breakpoints`].
pub fn breakpoints(expr: &Expr) -> Vec<f64> {
    expr.breakpoints()
}
