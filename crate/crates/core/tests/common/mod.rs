//! Reference implementations used to cross-check the library. None of
//! these call the library routine they are compared against.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use listlogic::benchlab::{DominoSystem, Exponent, RegExpr};
use listlogic::language::Formula;
use listlogic::sat::PropFormula;
use listlogic::{eval_term, Env, Structure, Value};

/// Plain nested vectors mirroring values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Atom(String),
    Seq(Vec<Tree>),
}

pub fn to_tree(v: &Value) -> Tree {
    match v {
        Value::Ur(n) => Tree::Atom(n.to_string()),
        Value::List(l) => Tree::Seq(l.iter().map(to_tree).collect()),
    }
}

/// `2^2^...^n` with `k` twos, or `None` beyond `u64`.
pub fn tower(k: u32, n: u64) -> Option<u64> {
    let mut v: u64 = n;
    for _ in 0..k {
        if v >= 64 {
            return None;
        }
        v = 2u64.checked_pow(v as u32)?;
    }
    Some(v)
}

/// Words of an expression, computed as sorted vectors of strings.
pub fn words(e: &RegExpr) -> Vec<String> {
    let mut w = match e {
        RegExpr::Sym(a) => vec![a.clone()],
        RegExpr::Union(a, b) => {
            let mut w = words(a);
            w.extend(words(b));
            w
        }
        RegExpr::Concat(a, b) => cross(&words(a), &words(b)),
        RegExpr::Power(a, exp) => {
            let m = match *exp {
                Exponent::Lit(m) => m,
                Exponent::Exp { k, n } => tower(k, n).expect("small exponent"),
            };
            let base = words(a);
            let mut acc = vec![String::new()];
            for _ in 0..m {
                acc = cross(&acc, &base);
            }
            acc
        }
    };
    w.sort();
    w.dedup();
    w
}

fn cross(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for u in a {
        for v in b {
            // symbols are separated so that multi-letter names stay unambiguous
            out.push(if u.is_empty() { v.clone() } else { format!("{u} {v}") });
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Tiling existence by dynamic programming over whole rows.
pub fn tiling_exists(d: &DominoSystem, m: usize) -> bool {
    let p = d.tiles;
    let mut rows: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for r in &rows {
            for t in 1..=p {
                if r.last().is_none_or(|&l| d.h.contains(&(l, t))) {
                    let mut r2 = r.clone();
                    r2.push(t);
                    next.push(r2);
                }
            }
        }
        rows = next;
    }
    let first: Vec<&Vec<usize>> = rows
        .iter()
        .filter(|r| d.init.iter().enumerate().all(|(c, &t)| r[c] == t))
        .collect();
    let below = |a: &Vec<usize>, b: &Vec<usize>| (0..m).all(|c| d.v.contains(&(a[c], b[c])));
    let mut reach: Vec<bool> = rows.iter().map(|r| first.contains(&r)).collect();
    for _ in 1..m {
        reach = rows
            .iter()
            .map(|b| rows.iter().zip(&reach).any(|(a, &ok)| ok && below(a, b)))
            .collect();
    }
    m == 0 || reach.iter().any(|&b| b)
}

/// Satisfiability of a propositional formula by trying every assignment.
pub fn brute_force_sat(p: &PropFormula, atoms: usize) -> bool {
    assert!(atoms <= 20);
    (0u32..1 << atoms).any(|bits| {
        let a: Vec<bool> = (0..atoms).map(|i| bits >> i & 1 == 1).collect();
        p.eval(&a)
    })
}

/// All ground atoms over the predicate pool: `P(v)` and `Q(v, w)`.
pub fn pool_atoms(pool: &[Value]) -> Vec<(&'static str, Vec<Value>)> {
    let mut out = Vec::new();
    for v in pool {
        out.push(("P", vec![v.clone()]));
    }
    for v in pool {
        for w in pool {
            out.push(("Q", vec![v.clone(), w.clone()]));
        }
    }
    out
}

/// Whether some closed-world structure over the pool atoms satisfies `f`,
/// decided with the model checker.
pub fn satisfiable_over_pool(f: &Formula, pool: &[Value]) -> bool {
    let atoms = pool_atoms(pool);
    let mut urs = BTreeSet::new();
    pool.iter().for_each(|v| v.urelements(&mut urs));
    urs.insert("c".to_string());
    (0u32..1 << atoms.len()).any(|bits| {
        let mut s = Structure::new(urs.iter().cloned());
        s.declare_predicate("P", 1).unwrap();
        s.declare_predicate("Q", 2).unwrap();
        for (i, (name, args)) in atoms.iter().enumerate() {
            if bits >> i & 1 == 1 {
                s.insert(name, args.clone()).unwrap();
            }
        }
        listlogic::check(f, &s).unwrap().verdict
    })
}

/// Product of candidate counts along the quantifier prefix of `f`.
pub fn prefix_product(f: &Formula) -> u64 {
    let mut product = 1u64;
    let mut cur = f;
    while let Formula::Quant { bound, body, .. } = cur {
        let v = eval_term(bound, &Env::new(), &Structure::empty()).unwrap();
        // n elements, and also n non-empty initial segments
        product *= to_tree_len(&v);
        cur = body;
    }
    product
}

fn to_tree_len(v: &Value) -> u64 {
    match to_tree(v) {
        Tree::Seq(l) => l.len() as u64,
        Tree::Atom(_) => panic!("bound is an urelement"),
    }
}

/// The list of `b ++ c` for `b` in `s1`, `c` in `s2`, outer loop first.
pub fn nested_product(s1: &Value, s2: &Value) -> Value {
    let (Value::List(a), Value::List(b)) = (s1, s2) else {
        panic!("lists expected");
    };
    let mut out = Vec::new();
    for x in a.iter() {
        for y in b.iter() {
            let (Value::List(x), Value::List(y)) = (x, y) else {
                panic!("lists of lists expected");
            };
            out.push(Value::list(x.iter().chain(y.iter()).cloned().collect()));
        }
    }
    Value::list(out)
}

pub fn counts<K: Ord>(items: impl IntoIterator<Item = K>) -> BTreeMap<K, usize> {
    let mut m = BTreeMap::new();
    for k in items {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}
