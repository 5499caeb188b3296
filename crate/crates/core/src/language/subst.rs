//! Capture-avoiding substitution of terms for free variables.

use std::collections::{BTreeMap, BTreeSet};

use crate::language::ast::{Formula, Term};

pub type Substitution = BTreeMap<String, Term>;

struct Subst<'a> {
    map: &'a Substitution,
    /// Free variables of every replacement term; binders clashing with
    /// these are renamed.
    danger: BTreeSet<String>,
}

fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}_{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded supply of names")
}

impl Subst<'_> {
    /// Prepares a binder: returns the (possibly renamed) binder name and the
    /// substitution to use under it.
    fn enter(&self, binders: &[&String], scope_free: &BTreeSet<String>) -> (Vec<String>, Substitution) {
        let mut inner = self.map.clone();
        let mut names = Vec::new();
        let mut avoid: BTreeSet<String> = self.danger.union(scope_free).cloned().collect();
        for b in binders {
            avoid.insert((*b).clone());
        }
        for b in binders {
            inner.remove(*b);
            if self.danger.contains(*b) {
                let new = fresh(b, &avoid);
                avoid.insert(new.clone());
                inner.insert((*b).clone(), Term::Var(new.clone()));
                names.push(new);
            } else {
                names.push((*b).clone());
            }
        }
        (names, inner)
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Nil | Term::Ur(_) => t.clone(),
            Term::Var(x) => self.map.get(x).cloned().unwrap_or_else(|| t.clone()),
            Term::List(ts) => Term::List(ts.iter().map(|t| self.term(t)).collect()),
            Term::Head(a) => Term::head(self.term(a)),
            Term::Tail(a) => Term::tail(self.term(a)),
            Term::Cons(a, b) => Term::cons(self.term(a), self.term(b)),
            Term::Conc(a, b) => Term::conc(self.term(a), self.term(b)),
            Term::BSearch { mode, var, body, bound } => {
                let (names, inner) = self.enter(&[var], &body.free_vars());
                Term::BSearch {
                    mode: *mode,
                    var: names[0].clone(),
                    body: Box::new(substitute_formula(body, &inner)),
                    bound: Box::new(self.term(bound)),
                }
            }
            Term::Iter {
                count,
                numeral,
                base,
                var,
                step,
            } => {
                let (names, inner) = self.enter(&[var], &step.free_vars());
                Term::Iter {
                    count: *count,
                    numeral: *numeral,
                    base: Box::new(self.term(base)),
                    var: names[0].clone(),
                    step: Box::new(substitute(step, &inner)),
                }
            }
            Term::Rec {
                base,
                acc,
                elem,
                step,
                bound,
            } => {
                let (names, inner) = self.enter(&[acc, elem], &step.free_vars());
                Term::Rec {
                    base: Box::new(self.term(base)),
                    acc: names[0].clone(),
                    elem: names[1].clone(),
                    step: Box::new(substitute(step, &inner)),
                    bound: Box::new(self.term(bound)),
                }
            }
        }
    }

    fn formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Eq(a, b) => Formula::Eq(self.term(a), self.term(b)),
            Formula::Mem(a, b) => Formula::Mem(self.term(a), self.term(b)),
            Formula::Seg(a, b) => Formula::Seg(self.term(a), self.term(b)),
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(|t| self.term(t)).collect()),
            Formula::Not(g) => Formula::not(self.formula(g)),
            Formula::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Formula::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Formula::Quant {
                kind,
                var,
                mode,
                bound,
                body,
            } => {
                let (names, inner) = self.enter(&[var], &body.free_vars());
                Formula::Quant {
                    kind: *kind,
                    var: names[0].clone(),
                    mode: *mode,
                    bound: self.term(bound),
                    body: Box::new(substitute_formula(body, &inner)),
                }
            }
        }
    }
}

fn danger_set(map: &Substitution) -> BTreeSet<String> {
    map.values().flat_map(|t| t.free_vars()).collect()
}

/// Simultaneously replaces the free occurrences of each mapped variable.
pub fn substitute(t: &Term, map: &Substitution) -> Term {
    if map.is_empty() {
        return t.clone();
    }
    Subst {
        map,
        danger: danger_set(map),
    }
    .term(t)
}

pub fn substitute_formula(f: &Formula, map: &Substitution) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    Subst {
        map,
        danger: danger_set(map),
    }
    .formula(f)
}

/// Single-variable convenience wrapper.
pub fn substitute_one(t: &Term, var: &str, by: &Term) -> Term {
    let mut map = Substitution::new();
    map.insert(var.to_string(), by.clone());
    substitute(t, &map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{parse_formula, parse_term};

    #[test]
    fn plain_replacement() {
        let t = parse_term("cons($y, 'a)").unwrap();
        let r = substitute_one(&t, "y", &parse_term("cons($v, 'a)").unwrap());
        assert_eq!(r.to_string(), "cons(cons($v, 'a), 'a)");
    }

    #[test]
    fn bound_occurrences_untouched() {
        let t = parse_term("rec($x; $x, $b. cons($x, $b); $x)").unwrap();
        let r = substitute_one(&t, "x", &Term::Nil);
        assert_eq!(r.to_string(), "rec(nil; $x, $b. cons($x, $b); nil)");
    }

    #[test]
    fn capture_is_avoided() {
        // replacing $v by $x under a binder for $x must rename the binder
        let f = parse_formula("exists $x in ['a] . $x = $v").unwrap();
        let mut m = Substitution::new();
        m.insert("v".into(), Term::var("x"));
        let r = substitute_formula(&f, &m);
        assert_eq!(r.to_string(), "exists $x_1 in ['a] . $x_1 = $x");
        assert_eq!(r.free_vars().into_iter().collect::<Vec<_>>(), vec!["x".to_string()]);
    }

    #[test]
    fn simultaneous() {
        let t = parse_term("cons($g, $b)").unwrap();
        let mut m = Substitution::new();
        m.insert("g".into(), Term::var("b"));
        m.insert("b".into(), Term::ur("c"));
        assert_eq!(substitute(&t, &m).to_string(), "cons($b, 'c)");
    }
}
