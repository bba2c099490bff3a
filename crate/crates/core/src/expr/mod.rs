//! Function expressions in `t` and time-scale descriptions.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" unary)?
//! atom  := number | "t" | "pi" | func "(" expr ("," expr)* ")" | "(" expr ")"
//! func  := "sqrt" | "abs" | "sin" | "cos" | "exp" | "ln" | "pow"
//! ```

mod ast;
mod lexer;
mod parser;
mod scale;

pub use ast::{Expr, Func};
pub use parser::parse_expr;
pub use scale::{parse_scale, parse_scale_expr, ScaleExpr};
