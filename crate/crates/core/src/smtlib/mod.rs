//! SMT-LIB 2.6 front end for the `QF_FFA` logic.
//!
//! Text goes through [`tokenize`], then [`parse_script`] (commands, sorts,
//! aliases) and finally [`sort_check`] (typed terms). [`parse_typed`] runs
//! all three. Printing a [`TypedScript`] with `Display` yields text that
//! parses back to the same script.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod sexpr;

pub use ast::{Command, Connective, FfOp, Script, Sort, Term, TypedScript};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{
    is_reserved_name, literal_coefficients, parse_literal, parse_script, parse_typed, sort_check,
    LiteralForm,
};
pub use sexpr::SExpr;
