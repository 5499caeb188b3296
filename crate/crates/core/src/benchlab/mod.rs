//! Instance generators for the two succinctness reductions, with
//! brute-force reference oracles.

pub mod domino;
pub mod explist;
pub mod random;
pub mod regex;

pub use domino::{
    domino_theory, is_tiling, oracle_tiling, oracle_tiling_with, side_value, tile_predicate, tiling_model,
    DominoSystem, Tiling, TilingGuard,
};
pub use explist::{
    explist_term, expn, expn_with_ceiling, multiply, power_term, power_with_chain, times_term, Flavor, Namer,
    DEFAULT_EXPN_CEILING,
};
pub use regex::{
    oracle_lang, oracle_lang_with, regex_ineq_formula, regex_list_term, word_to_string, Exponent, LangGuard, RegExpr,
    Word,
};
