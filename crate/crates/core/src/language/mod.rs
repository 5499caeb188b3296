//! Abstract syntax, surface grammar and syntactic metrics.

mod ast;
mod metrics;
mod parser;
mod printer;
mod subst;
mod validate;

pub use ast::{term_is_predicate_free, Formula, Mode, Numeral, Quantifier, Term};
pub use metrics::{classify, classify_formula, formula_rank, formula_size, numeral_size, rank, size, Classification};
pub use parser::{parse_expr, parse_formula, parse_term, Expr};
pub use subst::{substitute, substitute_formula, substitute_one, Substitution};
pub use validate::{validate, validate_term, Diagnostic, DiagnosticKind};
