//! Expression language for Lagrangians `L(x, y, ca, cb)`.
//!
//! `ca` and `cb` stand for the left Caputo value `u` and the right Caputo
//! value `v` at a node. Grammar, loosest binding first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?            right associative
//! atom  := number | name | name '(' args ')' | '(' expr ')'
//! ```
//!
//! Functions: `sin cos exp log sqrt abs` (one argument) and
//! `ml(order, arg)`, the Mittag-Leffler function with a literal order.

mod ast;
mod dual;
mod eval;
mod parser;

pub use ast::{BinaryOp, Expr, UnaryOp, Var, VarSet};
pub use dual::Dual4;
pub use eval::{BoundLagrangian, Lagrangian, Partials};
pub use parser::parse;
