//! The component-and-connector architecture language (`.arc` files).

mod ast;
mod check;
mod loader;
mod parser;
mod printer;
mod symbols;

pub use ast::*;
pub use check::check_context_conditions;
pub use loader::{load_model_dirs, LoadError};
pub use parser::parse_architecture;
pub use printer::print_unit;
pub use symbols::{resolve_symbols, BehaviorNode, ResolutionError, RootError, SymbolTable};
