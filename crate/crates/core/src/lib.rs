//! Bounded list logic over hereditarily finite list superstructures.

pub mod batch;
pub mod benchlab;
pub mod error;
pub mod eval;
pub mod language;
pub mod sat;
pub mod structure;
pub mod unfold;
pub mod value;

pub use error::{Error, Result};
pub use eval::{check, eval_term, CheckReport, Counters, Env, EvalConfig, Evaluator};
pub use language::{parse_formula, parse_term, Formula, Term};
pub use sat::{sat_check, SatReport, SatVerdict};
pub use structure::{Signature, Structure};
pub use unfold::{unfold_formula, unfold_term, UnfoldReport};
pub use value::Value;
