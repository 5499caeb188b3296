//! Rewriting flat iterative and explicit flat recursive terms into
//! equivalent terms built from the four list functions only.

use crate::error::{Error, Result};
use crate::eval::{eval_term, Env};
use crate::language::{rank, size, substitute, Formula, Substitution, Term};
use crate::structure::Structure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnfoldReport {
    pub input: Term,
    pub output: Term,
    pub input_size: usize,
    pub output_size: usize,
    pub input_rank: usize,
}

pub const DEFAULT_MAX_SIZE: usize = 4_000_000;

#[derive(Debug, Clone, Copy)]
pub struct Unfolder {
    /// Largest canonical size an unfolded term may reach.
    pub max_size: usize,
}

impl Default for Unfolder {
    fn default() -> Self {
        Unfolder {
            max_size: DEFAULT_MAX_SIZE,
        }
    }
}

fn occurrences(t: &Term, x: &str) -> usize {
    let mut n = 0;
    t.visit(&mut |s| {
        if matches!(s, Term::Var(v) if v == x) {
            n += 1;
        }
    });
    n
}

impl Unfolder {
    pub fn unfold_term(&self, t: &Term) -> Result<UnfoldReport> {
        let output = self.term(t)?;
        Ok(UnfoldReport {
            input_size: size(t),
            output_size: size(&output),
            input_rank: rank(t),
            input: t.clone(),
            output,
        })
    }

    pub fn unfold_formula(&self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Eq(a, b) => Formula::Eq(self.term(a)?, self.term(b)?),
            Formula::Mem(a, b) => Formula::Mem(self.term(a)?, self.term(b)?),
            Formula::Seg(a, b) => Formula::Seg(self.term(a)?, self.term(b)?),
            Formula::Pred(p, args) => {
                Formula::Pred(p.clone(), args.iter().map(|t| self.term(t)).collect::<Result<_>>()?)
            }
            Formula::Not(g) => Formula::not(self.unfold_formula(g)?),
            Formula::And(a, b) => Formula::and(self.unfold_formula(a)?, self.unfold_formula(b)?),
            Formula::Or(a, b) => Formula::or(self.unfold_formula(a)?, self.unfold_formula(b)?),
            Formula::Quant {
                kind,
                var,
                mode,
                bound,
                body,
            } => Formula::quant(*kind, var, *mode, self.term(bound)?, self.unfold_formula(body)?),
        })
    }

    /// `h` with each mapped variable replaced, refusing results above the size limit.
    fn instantiate(&self, h: &Term, map: &Substitution) -> Result<Term> {
        let mut predicted = size(h) as u128;
        for (x, by) in map {
            let occ = occurrences(h, x) as u128;
            predicted = predicted + occ * size(by) as u128 - occ * (x.len() as u128 + 1);
        }
        if predicted > self.max_size as u128 {
            return Err(Error::Budget {
                what: "unfolded term size",
                limit: self.max_size as u64,
            });
        }
        Ok(substitute(h, map))
    }

    fn term(&self, t: &Term) -> Result<Term> {
        Ok(match t {
            Term::Nil | Term::Ur(_) | Term::Var(_) => t.clone(),
            Term::List(ts) => Term::List(ts.iter().map(|t| self.term(t)).collect::<Result<_>>()?),
            Term::Head(a) => Term::head(self.term(a)?),
            Term::Tail(a) => Term::tail(self.term(a)?),
            Term::Cons(a, b) => Term::cons(self.term(a)?, self.term(b)?),
            Term::Conc(a, b) => Term::conc(self.term(a)?, self.term(b)?),
            Term::BSearch { .. } => {
                if !t.is_ground() || !crate::language::term_is_predicate_free(t) {
                    return Err(Error::Precondition(format!(
                        "bounded search cannot be unfolded unless ground and predicate-free: {t}"
                    )));
                }
                Term::from_value(&eval_term(t, &Env::new(), &Structure::empty())?)
            }
            Term::Iter {
                count, base, var, step, ..
            } => {
                if !base.is_standard() || !step.is_standard() {
                    return Err(Error::Precondition(format!("iterative term is not flat: {t}")));
                }
                let mut acc = (**base).clone();
                let mut map = Substitution::new();
                for _ in 0..*count {
                    map.insert(var.clone(), acc);
                    acc = self.instantiate(step, &map)?;
                }
                acc
            }
            Term::Rec {
                base,
                acc,
                elem,
                step,
                bound,
            } => {
                if !base.is_standard() || !step.is_standard() {
                    return Err(Error::Precondition(format!("recursive term is not flat: {t}")));
                }
                if !bound.is_ground() {
                    return Err(Error::Precondition(format!(
                        "recursive term is not explicit, its bound has variables: {t}"
                    )));
                }
                if !crate::language::term_is_predicate_free(bound) {
                    return Err(Error::Precondition(format!(
                        "recursive term's bound mentions predicates: {t}"
                    )));
                }
                let l = eval_term(bound, &Env::new(), &Structure::empty())?;
                let elems = l.expect_list("rec")?;
                let mut g = (**base).clone();
                let mut map = Substitution::new();
                for b in elems.iter() {
                    map.insert(acc.clone(), g);
                    map.insert(elem.clone(), Term::from_value(b));
                    g = self.instantiate(step, &map)?;
                }
                g
            }
        })
    }
}

pub fn unfold_term(t: &Term) -> Result<UnfoldReport> {
    Unfolder::default().unfold_term(t)
}

pub fn unfold_formula(f: &Formula) -> Result<Formula> {
    Unfolder::default().unfold_formula(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{parse_formula, parse_term};

    fn unfold(src: &str) -> String {
        unfold_term(&parse_term(src).unwrap()).unwrap().output.to_string()
    }

    #[test]
    fn examples() {
        assert_eq!(unfold("iter<0,u>($f; $y. cons($y, 'a))"), "$f");
        assert_eq!(unfold("iter<2,u>($v; $y. cons($y,'a))"), "cons(cons($v, 'a), 'a)");
        assert_eq!(
            unfold("rec(nil; $g,$b. cons($g,$b); ['a,'b])"),
            "cons(cons(nil, 'a), 'b)"
        );
    }

    #[test]
    fn formula_example() {
        let f = parse_formula("exists $x in iter<1,u>([nil]; $y. conc($y,$y)) . $x = nil").unwrap();
        assert_eq!(
            unfold_formula(&f).unwrap().to_string(),
            "exists $x in conc([nil], [nil]) . $x = nil"
        );
    }

    #[test]
    fn standard_terms_are_fixed_points() {
        for src in ["nil", "cons(tail($x), head($x))", "conc(['a], [nil, 'b])"] {
            let t = parse_term(src).unwrap();
            assert_eq!(unfold_term(&t).unwrap().output, t);
        }
    }

    #[test]
    fn preconditions() {
        for src in [
            "rec(nil; $g,$b. cons($g,$b); $v)",
            "iter<2,u>(nil; $y. iter<1,u>($y; $z. $z))",
            "bsearch_in($x. P($x), ['a])",
            "bsearch_in($x. $x = 'a, $v)",
        ] {
            let err = unfold_term(&parse_term(src).unwrap()).unwrap_err();
            assert!(matches!(err, Error::Precondition(_)), "{src}: {err:?}");
        }
    }

    #[test]
    fn ground_search_becomes_constant() {
        assert_eq!(unfold("bsearch_in($x. $x = 'b, ['a, 'b])"), "'b");
    }

    #[test]
    fn nested_bound_is_evaluated() {
        let src = "rec(nil; $g,$b. cons($g, 'c); rec(nil; $g,$b. cons($g,$b); ['a,'b]))";
        assert_eq!(unfold(src), "cons(cons(nil, 'c), 'c)");
    }

    #[test]
    fn size_limit() {
        let u = Unfolder { max_size: 1000 };
        let t = parse_term("iter<20,b>([nil]; $y. conc($y, $y))").unwrap();
        assert!(u.unfold_term(&t).unwrap_err().is_budget());
    }
}
