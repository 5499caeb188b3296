//! Short ground terms denoting very long lists, and the product of
//! lists of words.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::{Numeral, Term};

/// Hands out binder names that do not clash within one generated term.
#[derive(Debug, Default)]
pub struct Namer {
    next: usize,
}

impl Namer {
    pub fn pair(&mut self) -> (String, String) {
        self.next += 1;
        (format!("g{}", self.next), format!("b{}", self.next))
    }

    pub fn one(&mut self, stem: &str) -> String {
        self.next += 1;
        format!("{stem}{}", self.next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Rec,
    IterU,
    IterB,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Rec, Flavor::IterU, Flavor::IterB];

    /// The `k` values this flavor can express.
    pub fn supports(self, k: u32) -> bool {
        match self {
            Flavor::Rec => k >= 1,
            Flavor::IterU => k == 1,
            Flavor::IterB => k == 1 || k == 2,
        }
    }

    /// How the generated term is laid out, for reporting alongside it.
    pub fn calibration(self) -> &'static str {
        match self {
            Flavor::Rec => "doubling recursion over a chain of n nils; each level recurses over the previous level",
            Flavor::IterU => "n doublings of [nil] with a unary count",
            Flavor::IterB => "binary count 2^n: cons steps from nil at k=1, doublings of [nil] at k=2",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Rec => "rec",
            Flavor::IterU => "iter_u",
            Flavor::IterB => "iter_b",
        })
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rec" => Ok(Flavor::Rec),
            "iter_u" | "iter-u" => Ok(Flavor::IterU),
            "iter_b" | "iter-b" => Ok(Flavor::IterB),
            _ => Err(Error::Precondition(format!(
                "unknown flavor {s:?}, expected rec, iter_u or iter_b"
            ))),
        }
    }
}

pub const DEFAULT_EXPN_CEILING: u64 = 1 << 20;

/// The tower `2^2^...^n` with `k` twos, refusing values above `ceiling`.
pub fn expn_with_ceiling(k: u32, n: u64, ceiling: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::Precondition("expn needs k >= 1".into()));
    }
    let over = || Error::Guard(format!("expn({k},{n}) exceeds {ceiling}"));
    let mut v = n;
    for _ in 0..k {
        if v >= 63 {
            return Err(over());
        }
        v = 1u64 << v;
        if v > ceiling {
            return Err(over());
        }
    }
    Ok(v)
}

pub fn expn(k: u32, n: u64) -> Result<u64> {
    expn_with_ceiling(k, n, DEFAULT_EXPN_CEILING)
}

/// `cons(...cons(nil, nil)..., nil)` with `n` elements.
fn nil_chain(n: u64) -> Term {
    (0..n).fold(Term::Nil, |t, _| Term::cons(t, Term::Nil))
}

fn doubling(namer: &mut Namer, bound: Term) -> Term {
    let (g, b) = namer.pair();
    Term::rec(
        Term::List(vec![Term::Nil]),
        &g,
        &b,
        Term::conc(Term::var(&g), Term::var(&g)),
        bound,
    )
}

/// A ground term whose value is a list of `expn(k, n)` nils.
pub fn explist_term(k: u32, n: u64, flavor: Flavor) -> Result<Term> {
    explist_term_in(&mut Namer::default(), k, n, flavor)
}

fn explist_term_in(namer: &mut Namer, k: u32, n: u64, flavor: Flavor) -> Result<Term> {
    if !flavor.supports(k) {
        return Err(Error::Precondition(format!("flavor {flavor} does not support k = {k}")));
    }
    let doubled = |namer: &mut Namer, count: u64, numeral: Numeral| {
        let y = namer.one("y");
        Term::iter(
            count,
            numeral,
            Term::List(vec![Term::Nil]),
            &y,
            Term::conc(Term::var(&y), Term::var(&y)),
        )
    };
    Ok(match flavor {
        Flavor::Rec => {
            let mut t = nil_chain(n);
            for _ in 0..k {
                t = doubling(namer, t);
            }
            t
        }
        Flavor::IterU => doubled(namer, n, Numeral::Unary),
        Flavor::IterB => {
            if n >= 64 {
                return Err(Error::Guard(format!("count 2^{n} does not fit a 64-bit numeral")));
            }
            if k == 1 {
                let y = namer.one("y");
                Term::iter(
                    1 << n,
                    Numeral::Binary,
                    Term::Nil,
                    &y,
                    Term::cons(Term::var(&y), Term::Nil),
                )
            } else {
                doubled(namer, 1 << n, Numeral::Binary)
            }
        }
    })
}

/// The list of `conc(x, c)` for `c` in `y`.
fn multiply_element(namer: &mut Namer, x: Term, y: Term) -> Term {
    let (g, c) = namer.pair();
    Term::rec(
        Term::Nil,
        &g,
        &c,
        Term::cons(Term::var(&g), Term::conc(x, Term::var(&c))),
        y,
    )
}

/// The list of `conc(b, c)` for `b` in `l1` (outer) and `c` in `l2` (inner).
pub fn multiply(namer: &mut Namer, l1: Term, l2: Term) -> Term {
    let (g, b) = namer.pair();
    let inner = multiply_element(namer, Term::var(&b), l2);
    Term::rec(Term::Nil, &g, &b, Term::conc(Term::var(&g), inner), l1)
}

/// `multiply` over the free variables `$x1` and `$x2`.
pub fn times_term() -> Term {
    multiply(&mut Namer::default(), Term::var("x1"), Term::var("x2"))
}

/// The `m`-fold product of `x` with itself, where `m` is the length of
/// the ground list `chain`. `x` occurs once in the result.
pub fn power_with_chain(namer: &mut Namer, x: Term, chain: Term) -> Term {
    let (g0, b0) = namer.pair();
    let copies = Term::rec(Term::Nil, &g0, &b0, Term::cons(Term::var(&g0), x), chain);
    let (g, b) = namer.pair();
    let step = multiply(namer, Term::var(&g), Term::var(&b));
    Term::rec(Term::List(vec![Term::Nil]), &g, &b, step, copies)
}

/// The `expn(k, n)`-fold product of `$x` with itself.
pub fn power_term(k: u32, n: u64) -> Result<Term> {
    let mut namer = Namer::default();
    let chain = explist_term_in(&mut namer, k, n, Flavor::Rec)?;
    Ok(power_with_chain(&mut namer, Term::var("x"), chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval_term, Env};
    use crate::language::classify;
    use crate::structure::Structure;
    use crate::value::Value;

    fn eval(t: &Term, binds: &[(&str, &str)]) -> Value {
        let env: Env = binds.iter().map(|(k, v)| (k.to_string(), v.parse().unwrap())).collect();
        eval_term(t, &env, &Structure::empty()).unwrap()
    }

    #[test]
    fn expn_values() {
        assert_eq!(expn(1, 3).unwrap(), 8);
        assert_eq!(expn(2, 1).unwrap(), 4);
        assert_eq!(expn(1, 0).unwrap(), 1);
        assert_eq!(expn(3, 2).unwrap(), 65536);
        assert!(matches!(expn(2, 5), Err(Error::Guard(_))));
        assert!(matches!(expn(1, 200), Err(Error::Guard(_))));
    }

    #[test]
    fn explist_small_cases() {
        assert_eq!(eval(&explist_term(1, 2, Flavor::IterU).unwrap(), &[]), Value::nils(4));
        assert_eq!(eval(&explist_term(2, 1, Flavor::Rec).unwrap(), &[]), Value::nils(4));
        assert_eq!(eval(&explist_term(1, 0, Flavor::Rec).unwrap(), &[]), Value::nils(1));
        assert_eq!(eval(&explist_term(2, 2, Flavor::IterB).unwrap(), &[]), Value::nils(16));
    }

    #[test]
    fn unsupported_combinations() {
        assert!(explist_term(2, 1, Flavor::IterU).is_err());
        assert!(explist_term(3, 1, Flavor::IterB).is_err());
        assert!(explist_term(0, 1, Flavor::Rec).is_err());
    }

    #[test]
    fn rec_flavor_is_explicit_but_not_flat_beyond_one_level() {
        let c = classify(&explist_term(1, 3, Flavor::Rec).unwrap());
        assert!(c.is_flat && c.is_explicit);
        let c = classify(&explist_term(2, 3, Flavor::Rec).unwrap());
        assert!(c.is_explicit);
    }

    #[test]
    fn times_examples() {
        let t = times_term();
        assert_eq!(
            eval(&t, &[("x1", "[['a]]"), ("x2", "[['b], ['c]]")]),
            "[['a, 'b], ['a, 'c]]".parse().unwrap()
        );
        assert_eq!(
            eval(&t, &[("x1", "[['a], ['b, 'c]]"), ("x2", "[nil]")]),
            "[['a], ['b, 'c]]".parse().unwrap()
        );
    }

    #[test]
    fn power_example() {
        let t = power_term(1, 1).unwrap();
        assert_eq!(eval(&t, &[("x", "[['a]]")]), "[['a, 'a]]".parse().unwrap());
        assert_eq!(t.free_vars().into_iter().collect::<Vec<_>>(), vec!["x".to_string()]);
    }
}
