//! MiniOO: a small object-oriented language whose sources lower to
//! [`CodeFacts`](crate::model::CodeFacts). Only control flow and calls are
//! modelled; the grammar is documented in `docs/minioo.ebnf`.

pub mod ast;
mod cfg;
mod lower;
mod parser;
mod printer;

pub use cfg::{build_cfg, count_decisions};
pub use lower::{lower_to_facts, ComponentMap, LowerError, Lowered, UnresolvedCallee};
pub use parser::{parse_source, SyntaxError};
pub use printer::{expr_to_string, print_source};

pub use ast::MiniOoAst;
