//! Seeded random instances for property checks and benchmarks.
//!
//! Term generators are sort-aware: list operations are only ever applied
//! to list-valued subterms, so generated terms evaluate without sort errors
//! under the environments generated alongside them.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::benchlab::domino::DominoSystem;
use crate::benchlab::explist::{explist_term, Flavor};
use crate::benchlab::regex::{Exponent, RegExpr};
use crate::eval::{eval_term, Env};
use crate::language::{Formula, Mode, Numeral, Quantifier, Term};
use crate::structure::Structure;
use crate::value::Value;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

const URS: [&str; 3] = ["a", "b", "c"];

/// A value of nesting depth at most `depth`, with lists of at most `width` elements.
pub fn value<R: Rng>(rng: &mut R, depth: u32, width: usize) -> Value {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.7) {
            Value::ur(URS.choose(rng).expect("nonempty"))
        } else {
            Value::nil()
        };
    }
    list_value(rng, depth, width)
}

pub fn list_value<R: Rng>(rng: &mut R, depth: u32, width: usize) -> Value {
    let n = rng.gen_range(0..=width);
    Value::list((0..n).map(|_| value(rng, depth.saturating_sub(1), width)).collect())
}

/// Variables available to a generated term, split by sort.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    pub lists: Vec<String>,
    pub elems: Vec<String>,
}

/// A list-valued term built from the four list functions only.
pub fn list_term<R: Rng>(rng: &mut R, scope: &Scope, depth: u32) -> Term {
    let leaf = |rng: &mut R| -> Term {
        if !scope.lists.is_empty() && rng.gen_bool(0.6) {
            Term::var(scope.lists.choose(rng).expect("nonempty"))
        } else if rng.gen_bool(0.5) {
            Term::Nil
        } else {
            Term::List(vec![Term::ur(URS.choose(rng).expect("nonempty"))])
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..7) {
        0 | 1 => leaf(rng),
        2 => Term::cons(list_term(rng, scope, depth - 1), elem_term(rng, scope, depth - 1)),
        3 => Term::conc(list_term(rng, scope, depth - 1), list_term(rng, scope, depth - 1)),
        4 => Term::tail(list_term(rng, scope, depth - 1)),
        5 => {
            let n = rng.gen_range(0..=2);
            Term::List((0..n).map(|_| elem_term(rng, scope, depth - 1)).collect())
        }
        _ => Term::cons(list_term(rng, scope, depth - 1), any_var(rng, scope)),
    }
}

fn any_var<R: Rng>(rng: &mut R, scope: &Scope) -> Term {
    let all: Vec<&String> = scope.lists.iter().chain(&scope.elems).collect();
    match all.choose(rng) {
        Some(v) => Term::var(v),
        None => Term::Nil,
    }
}

/// A term in element position: any value is acceptable.
pub fn elem_term<R: Rng>(rng: &mut R, scope: &Scope, depth: u32) -> Term {
    match rng.gen_range(0..5) {
        0 => Term::ur(URS.choose(rng).expect("nonempty")),
        1 if !scope.elems.is_empty() => Term::var(scope.elems.choose(rng).expect("nonempty")),
        2 => Term::head(list_term(rng, scope, depth.saturating_sub(1))),
        _ => list_term(rng, scope, depth),
    }
}

fn env_for<R: Rng>(rng: &mut R, names: &[&str]) -> Env {
    names
        .iter()
        .map(|n| {
            let mut v = list_value(rng, 2, 3);
            if v.is_nil() {
                v = Value::list(vec![Value::ur("a")]);
            }
            (n.to_string(), v)
        })
        .collect()
}

const ENV_VARS: [&str; 2] = ["v", "w"];

fn env_scope() -> Scope {
    Scope {
        lists: ENV_VARS.iter().map(|s| s.to_string()).collect(),
        elems: Vec::new(),
    }
}

/// A flat iterative term with `count` drawn from `0..=max_count`, and an
/// environment for its free variables.
pub fn flat_iter<R: Rng>(rng: &mut R, numeral: Numeral, max_count: u64) -> (Term, Env) {
    let outer = env_scope();
    let base = list_term(rng, &outer, 2);
    let mut inner = outer.clone();
    inner.lists.push("y".into());
    let step = loop {
        let h = list_term(rng, &inner, 3);
        // keep the unfolded size in check: at most two copies of the accumulator
        let mut occ = 0;
        h.visit(&mut |t| {
            if matches!(t, Term::Var(v) if v == "y") {
                occ += 1;
            }
        });
        if (1..=2).contains(&occ) {
            break h;
        }
    };
    let count = rng.gen_range(0..=max_count);
    (Term::iter(count, numeral, base, "y", step), env_for(rng, &ENV_VARS))
}

fn literal_list<R: Rng>(rng: &mut R, max_len: usize) -> Term {
    let n = rng.gen_range(0..=max_len);
    Term::List((0..n).map(|_| Term::from_value(&value(rng, 1, 2))).collect())
}

fn rec_over<R: Rng>(rng: &mut R, bound: Term) -> Term {
    let outer = env_scope();
    let base = list_term(rng, &outer, 2);
    let mut inner = outer;
    inner.lists.push("g".into());
    inner.elems.push("b".into());
    let step = list_term(rng, &inner, 3);
    Term::rec(base, "g", "b", step, bound)
}

/// An explicit flat recursive term of rank 1 or 2 whose bound evaluates
/// to a list of at most `max_bound` elements, with an environment.
pub fn explicit_flat_rec<R: Rng>(rng: &mut R, max_bound: usize) -> (Term, Env) {
    let bound = loop {
        let candidate = if rng.gen_bool(0.5) {
            literal_list(rng, max_bound)
        } else {
            // a rank-1 bound; its step may not mention the environment
            let inner = Scope {
                lists: vec!["g".into()],
                elems: vec!["b".into()],
            };
            let step = list_term(rng, &inner, 2);
            Term::rec(Term::Nil, "g", "b", step, literal_list(rng, 4))
        };
        match eval_term(&candidate, &Env::new(), &Structure::empty()) {
            Ok(Value::List(l)) if l.len() <= max_bound => break candidate,
            _ => continue,
        }
    };
    (rec_over(rng, bound), env_for(rng, &ENV_VARS))
}

fn regex_exponent<R: Rng>(rng: &mut R, max: u64) -> Exponent {
    let m = rng.gen_range(1..=max);
    if rng.gen_bool(0.3) {
        exp_form(m).unwrap_or(Exponent::Lit(m))
    } else {
        Exponent::Lit(m)
    }
}

fn exp_form(m: u64) -> Option<Exponent> {
    match m {
        1 => Some(Exponent::Exp { k: 1, n: 0 }),
        2 => Some(Exponent::Exp { k: 1, n: 1 }),
        4 => Some(Exponent::Exp { k: 1, n: 2 }),
        _ => None,
    }
}

fn exponent_value(e: Exponent) -> u64 {
    match e {
        Exponent::Lit(m) => m,
        Exponent::Exp { k, n } => crate::benchlab::explist::expn(k, n).unwrap_or(u64::MAX),
    }
}

/// An expression over `alphabet` with at most `max_ops` operators.
pub fn regex<R: Rng>(rng: &mut R, alphabet: &[&str], max_ops: usize, max_exp: u64) -> RegExpr {
    let ops = rng.gen_range(0..=max_ops);
    regex_with_ops(rng, alphabet, ops, max_exp)
}

fn regex_with_ops<R: Rng>(rng: &mut R, alphabet: &[&str], ops: usize, max_exp: u64) -> RegExpr {
    if ops == 0 {
        return RegExpr::sym(alphabet.choose(rng).expect("nonempty alphabet"));
    }
    match rng.gen_range(0..3) {
        0 => RegExpr::Power(
            Box::new(regex_with_ops(rng, alphabet, ops - 1, max_exp)),
            regex_exponent(rng, max_exp),
        ),
        op => {
            let left = rng.gen_range(0..ops);
            let a = regex_with_ops(rng, alphabet, left, max_exp);
            let b = regex_with_ops(rng, alphabet, ops - 1 - left, max_exp);
            if op == 1 {
                RegExpr::union(a, b)
            } else {
                RegExpr::concat(a, b)
            }
        }
    }
}

/// Rewrites that preserve the language and the operator count.
pub fn equivalent_variant<R: Rng>(rng: &mut R, e: &RegExpr) -> RegExpr {
    let sub = |rng: &mut R, e: &RegExpr| equivalent_variant(rng, e);
    match e {
        RegExpr::Sym(_) => e.clone(),
        RegExpr::Union(a, b) => {
            let (a, b) = (sub(rng, a), sub(rng, b));
            match (rng.gen_range(0..3), &a) {
                (0, _) => RegExpr::union(b, a),
                (1, RegExpr::Union(x, y)) => RegExpr::union((**x).clone(), RegExpr::union((**y).clone(), b)),
                _ => RegExpr::union(a, b),
            }
        }
        RegExpr::Concat(a, b) => {
            let (a, b) = (sub(rng, a), sub(rng, b));
            match &a {
                RegExpr::Concat(x, y) if rng.gen_bool(0.5) => {
                    RegExpr::concat((**x).clone(), RegExpr::concat((**y).clone(), b))
                }
                _ => RegExpr::concat(a, b),
            }
        }
        RegExpr::Power(a, exp) => {
            let a = sub(rng, a);
            let m = exponent_value(*exp);
            let exp = match (exp, exp_form(m)) {
                (Exponent::Lit(_), Some(f)) if rng.gen_bool(0.5) => f,
                (Exponent::Exp { .. }, _) if rng.gen_bool(0.5) => Exponent::Lit(m),
                _ => *exp,
            };
            RegExpr::Power(Box::new(a), exp)
        }
    }
}

/// A pair of expressions; about a third of the pairs denote the same language
/// by construction.
pub fn regex_pair<R: Rng>(rng: &mut R, alphabet: &[&str], max_ops: usize, max_exp: u64) -> (RegExpr, RegExpr) {
    let e1 = regex(rng, alphabet, max_ops, max_exp);
    let e2 = if rng.gen_bool(1.0 / 3.0) {
        equivalent_variant(rng, &e1)
    } else {
        regex(rng, alphabet, max_ops, max_exp)
    };
    (e1, e2)
}

pub fn domino_system<R: Rng>(rng: &mut R, max_tiles: usize, max_init: usize) -> DominoSystem {
    let tiles = rng.gen_range(1..=max_tiles);
    let density = rng.gen_range(0.3..0.9);
    let pairs = |rng: &mut R| -> BTreeSet<(usize, usize)> {
        let mut s = BTreeSet::new();
        for a in 1..=tiles {
            for b in 1..=tiles {
                if rng.gen_bool(density) {
                    s.insert((a, b));
                }
            }
        }
        s
    };
    let h = pairs(rng);
    let v = pairs(rng);
    let s = rng.gen_range(0..=max_init);
    let init = (0..s).map(|_| rng.gen_range(1..=tiles)).collect();
    DominoSystem { tiles, h, v, init }
}

/// The values that predicate arguments of [`ground_formula`] range over.
pub fn ground_pool() -> Vec<Value> {
    vec![Value::ur("a"), Value::ur("b"), Value::list(vec![Value::ur("a")])]
}

/// Predicates used by [`ground_formula`] with their arities.
pub const GROUND_PREDICATES: [(&str, usize); 2] = [("P", 1), ("Q", 2)];

/// A term that evaluates to `v`, sometimes indirectly.
fn term_for<R: Rng>(rng: &mut R, v: &Value) -> Term {
    let lit = Term::from_value(v);
    match rng.gen_range(0..4) {
        0 => Term::head(Term::List(vec![Term::ur("c"), lit])),
        1 => Term::head(Term::tail(Term::List(vec![lit, Term::Nil]))),
        _ => lit,
    }
}

fn pool_arg<R: Rng>(rng: &mut R, vars: &[String]) -> Term {
    if !vars.is_empty() && rng.gen_bool(0.5) {
        Term::var(vars.choose(rng).expect("nonempty"))
    } else {
        let pool = ground_pool();
        let v = pool.choose(rng).expect("nonempty").clone();
        term_for(rng, &v)
    }
}

fn pool_subset_term<R: Rng>(rng: &mut R) -> Term {
    let pool = ground_pool();
    let n = rng.gen_range(1..=pool.len());
    let mut elems: Vec<Value> = pool.choose_multiple(rng, n).cloned().collect();
    elems.shuffle(rng);
    let half = rng.gen_range(0..=elems.len());
    let right = elems.split_off(half);
    Term::conc(
        Term::from_value(&Value::list(elems)),
        Term::from_value(&Value::list(right)),
    )
}

/// A closed formula whose predicate atoms all lie in
/// `{P(v), Q(v, w) : v, w in ground_pool()}`; quantifiers range over
/// lists of pool values, so there are at most 12 distinct atoms.
pub fn ground_formula<R: Rng>(rng: &mut R, depth: u32) -> Formula {
    ground_formula_in(rng, depth, &mut Vec::new())
}

fn ground_formula_in<R: Rng>(rng: &mut R, depth: u32, vars: &mut Vec<String>) -> Formula {
    let atom = |rng: &mut R, vars: &[String]| match rng.gen_range(0..8) {
        0 => Formula::Eq(pool_arg(rng, vars), pool_arg(rng, vars)),
        1 => Formula::Mem(pool_arg(rng, vars), pool_subset_term(rng)),
        2..=4 => Formula::pred("P", vec![pool_arg(rng, vars)]),
        _ => Formula::pred("Q", vec![pool_arg(rng, vars), pool_arg(rng, vars)]),
    };
    if depth == 0 {
        return atom(rng, vars);
    }
    match rng.gen_range(0..7) {
        0 => atom(rng, vars),
        1 => Formula::not(ground_formula_in(rng, depth - 1, vars)),
        2 | 3 => Formula::and(
            ground_formula_in(rng, depth - 1, vars),
            ground_formula_in(rng, depth - 1, vars),
        ),
        4 | 5 => Formula::or(
            ground_formula_in(rng, depth - 1, vars),
            ground_formula_in(rng, depth - 1, vars),
        ),
        _ => {
            let x = format!("x{}", vars.len() + 1);
            let kind = if rng.gen_bool(0.5) {
                Quantifier::Forall
            } else {
                Quantifier::Exists
            };
            let bound = pool_subset_term(rng);
            vars.push(x.clone());
            let body = ground_formula_in(rng, depth - 1, vars);
            vars.pop();
            Formula::quant(kind, &x, Mode::In, bound, body)
        }
    }
}

/// A ground bound for a quantifier prefix: a literal list or a list-producing
/// term, of at most `max_len` elements.
fn prefix_bound<R: Rng>(rng: &mut R, max_len: usize) -> Term {
    match rng.gen_range(0..4) {
        0 if max_len >= 2 => {
            let n = rng.gen_range(0..=max_len.min(4).ilog2() as u64);
            explist_term(1, n, Flavor::Rec).expect("k = 1 is supported")
        }
        1 => Term::conc(literal_list(rng, max_len / 2), literal_list(rng, max_len / 2)),
        _ => literal_list(rng, max_len),
    }
}

/// A prenex formula with `1..=max_prefix` quantifiers over ground bounds
/// and a quantifier-free matrix, plus a structure interpreting `P/1`.
pub fn prefixed_formula<R: Rng>(rng: &mut R, max_prefix: usize, max_len: usize) -> (Formula, Structure) {
    let len = rng.gen_range(1..=max_prefix);
    let vars: Vec<String> = (1..=len).map(|i| format!("x{i}")).collect();
    let scope = Scope {
        lists: Vec::new(),
        elems: vars.clone(),
    };
    let atom = |rng: &mut R| match rng.gen_range(0..3) {
        0 => Formula::Eq(elem_term(rng, &scope, 1), elem_term(rng, &scope, 1)),
        1 => Formula::Mem(elem_term(rng, &scope, 1), literal_list(rng, 3)),
        _ => Formula::pred("P", vec![elem_term(rng, &scope, 1)]),
    };
    let mut matrix = atom(rng);
    for _ in 0..rng.gen_range(0..3) {
        let a = atom(rng);
        matrix = match rng.gen_range(0..3) {
            0 => Formula::and(matrix, a),
            1 => Formula::or(matrix, Formula::not(a)),
            _ => Formula::implies(a, matrix),
        };
    }
    let mut f = matrix;
    for x in vars.iter().rev() {
        let kind = if rng.gen_bool(0.5) {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        let mode = if rng.gen_bool(0.5) { Mode::In } else { Mode::Seg };
        f = Formula::quant(kind, x, mode, prefix_bound(rng, max_len), f);
    }
    let mut s = Structure::new(URS.iter().map(|u| u.to_string()));
    s.declare_predicate("P", 1).expect("arity 1");
    for _ in 0..rng.gen_range(0..6) {
        s.insert("P", vec![value(rng, 2, 2)]).expect("declared");
    }
    (f, s)
}
