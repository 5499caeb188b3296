use std::collections::BTreeSet;

use crate::value::Value;

/// Candidate range of a bounded construct: elements (`in`) or initial
/// segments (`sub`) of a list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    In,
    Seg,
}

/// How an iteration count is written; affects the size metric only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Numeral {
    Unary,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Nil,
    Ur(String),
    Var(String),
    List(Vec<Term>),
    Head(Box<Term>),
    Tail(Box<Term>),
    Cons(Box<Term>, Box<Term>),
    Conc(Box<Term>, Box<Term>),
    /// First element / initial segment of `bound` satisfying `body`, else `bound`.
    BSearch {
        mode: Mode,
        var: String,
        body: Box<Formula>,
        bound: Box<Term>,
    },
    /// `count`-fold application of `step` (with `var` standing for the
    /// previous value) starting from `base`.
    Iter {
        count: u64,
        numeral: Numeral,
        base: Box<Term>,
        var: String,
        step: Box<Term>,
    },
    /// Fold of `step` over the segment chain of `bound`, seeded by `base`.
    /// `acc` names the previous result and `elem` the newly added element.
    Rec {
        base: Box<Term>,
        acc: String,
        elem: String,
        step: Box<Term>,
        bound: Box<Term>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Mem(Term, Term),
    Seg(Term, Term),
    Pred(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Quant {
        kind: Quantifier,
        var: String,
        mode: Mode,
        bound: Term,
        body: Box<Formula>,
    },
}

// Constructors used by generators and tests.
impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn ur(name: &str) -> Term {
        Term::Ur(name.to_string())
    }

    pub fn head(t: Term) -> Term {
        Term::Head(Box::new(t))
    }

    pub fn tail(t: Term) -> Term {
        Term::Tail(Box::new(t))
    }

    pub fn cons(l: Term, x: Term) -> Term {
        Term::Cons(Box::new(l), Box::new(x))
    }

    pub fn conc(a: Term, b: Term) -> Term {
        Term::Conc(Box::new(a), Box::new(b))
    }

    pub fn bsearch(mode: Mode, var: &str, body: Formula, bound: Term) -> Term {
        Term::BSearch {
            mode,
            var: var.to_string(),
            body: Box::new(body),
            bound: Box::new(bound),
        }
    }

    pub fn iter(count: u64, numeral: Numeral, base: Term, var: &str, step: Term) -> Term {
        Term::Iter {
            count,
            numeral,
            base: Box::new(base),
            var: var.to_string(),
            step: Box::new(step),
        }
    }

    pub fn rec(base: Term, acc: &str, elem: &str, step: Term, bound: Term) -> Term {
        Term::Rec {
            base: Box::new(base),
            acc: acc.to_string(),
            elem: elem.to_string(),
            step: Box::new(step),
            bound: Box::new(bound),
        }
    }

    /// The constant term denoting `v`.
    pub fn from_value(v: &Value) -> Term {
        match v {
            Value::Ur(n) => Term::Ur(n.to_string()),
            Value::List(l) if l.is_empty() => Term::Nil,
            Value::List(l) => Term::List(l.iter().map(Term::from_value).collect()),
        }
    }

    /// True for Δ₀ terms: no bSearch, Iter or Rec node anywhere.
    pub fn is_standard(&self) -> bool {
        match self {
            Term::Nil | Term::Ur(_) | Term::Var(_) => true,
            Term::List(ts) => ts.iter().all(Term::is_standard),
            Term::Head(t) | Term::Tail(t) => t.is_standard(),
            Term::Cons(a, b) | Term::Conc(a, b) => a.is_standard() && b.is_standard(),
            Term::BSearch { .. } | Term::Iter { .. } | Term::Rec { .. } => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Nil | Term::Ur(_) => {}
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::List(ts) => ts.iter().for_each(|t| t.collect_free(bound, out)),
            Term::Head(t) | Term::Tail(t) => t.collect_free(bound, out),
            Term::Cons(a, b) | Term::Conc(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::BSearch {
                var, body, bound: b, ..
            } => {
                b.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::Iter { base, var, step, .. } => {
                base.collect_free(bound, out);
                bound.push(var.clone());
                step.collect_free(bound, out);
                bound.pop();
            }
            Term::Rec {
                base,
                acc,
                elem,
                step,
                bound: b,
            } => {
                base.collect_free(bound, out);
                b.collect_free(bound, out);
                bound.push(acc.clone());
                bound.push(elem.clone());
                step.collect_free(bound, out);
                bound.pop();
                bound.pop();
            }
        }
    }

    /// Urelement constants mentioned anywhere in the term.
    pub fn urelements(&self, out: &mut BTreeSet<String>) {
        self.visit(&mut |t| {
            if let Term::Ur(n) = t {
                out.insert(n.clone());
            }
        });
    }

    /// Pre-order walk over every term node, descending into bSearch bodies.
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self {
            Term::Nil | Term::Ur(_) | Term::Var(_) => {}
            Term::List(ts) => ts.iter().for_each(|t| t.visit(f)),
            Term::Head(t) | Term::Tail(t) => t.visit(f),
            Term::Cons(a, b) | Term::Conc(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::BSearch { body, bound, .. } => {
                body.visit_terms(f);
                bound.visit(f);
            }
            Term::Iter { base, step, .. } => {
                base.visit(f);
                step.visit(f);
            }
            Term::Rec { base, step, bound, .. } => {
                base.visit(f);
                step.visit(f);
                bound.visit(f);
            }
        }
    }
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `a -> b`, desugared.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn conjunction(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn disjunction(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    pub fn quant(kind: Quantifier, var: &str, mode: Mode, bound: Term, body: Formula) -> Formula {
        Formula::Quant {
            kind,
            var: var.to_string(),
            mode,
            bound,
            body: Box::new(body),
        }
    }

    pub fn forall(var: &str, mode: Mode, bound: Term, body: Formula) -> Formula {
        Formula::quant(Quantifier::Forall, var, mode, bound, body)
    }

    pub fn exists(var: &str, mode: Mode, bound: Term, body: Formula) -> Formula {
        Formula::quant(Quantifier::Exists, var, mode, bound, body)
    }

    pub fn pred(name: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(name.to_string(), args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Mem(a, b) | Formula::Seg(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Pred(_, args) => args.iter().for_each(|t| t.collect_free(bound, out)),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant {
                var, bound: b, body, ..
            } => {
                b.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Visits every term node occurring in the formula.
    pub fn visit_terms(&self, f: &mut dyn FnMut(&Term)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Mem(a, b) | Formula::Seg(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Pred(_, args) => args.iter().for_each(|t| t.visit(f)),
            Formula::Not(g) => g.visit_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::Quant { bound, body, .. } => {
                bound.visit(f);
                body.visit_terms(f);
            }
        }
    }

    /// Visits every predicate atom, including those inside bSearch bodies.
    pub fn visit_preds(&self, f: &mut dyn FnMut(&str, &[Term])) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) | Formula::Mem(a, b) | Formula::Seg(a, b) => {
                visit_term_preds(a, f);
                visit_term_preds(b, f);
            }
            Formula::Pred(name, args) => {
                f(name, args);
                args.iter().for_each(|t| visit_term_preds(t, f));
            }
            Formula::Not(g) => g.visit_preds(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_preds(f);
                b.visit_preds(f);
            }
            Formula::Quant { bound, body, .. } => {
                visit_term_preds(bound, f);
                body.visit_preds(f);
            }
        }
    }

    /// True when no predicate atom occurs anywhere, including inside terms.
    pub fn is_predicate_free(&self) -> bool {
        let mut found = false;
        self.visit_preds(&mut |_, _| found = true);
        !found
    }
}

fn visit_term_preds(t: &Term, f: &mut dyn FnMut(&str, &[Term])) {
    match t {
        Term::Nil | Term::Ur(_) | Term::Var(_) => {}
        Term::List(ts) => ts.iter().for_each(|t| visit_term_preds(t, f)),
        Term::Head(t) | Term::Tail(t) => visit_term_preds(t, f),
        Term::Cons(a, b) | Term::Conc(a, b) => {
            visit_term_preds(a, f);
            visit_term_preds(b, f);
        }
        Term::BSearch { body, bound, .. } => {
            body.visit_preds(f);
            visit_term_preds(bound, f);
        }
        Term::Iter { base, step, .. } => {
            visit_term_preds(base, f);
            visit_term_preds(step, f);
        }
        Term::Rec { base, step, bound, .. } => {
            visit_term_preds(base, f);
            visit_term_preds(step, f);
            visit_term_preds(bound, f);
        }
    }
}

/// Predicate-free check for terms.
pub fn term_is_predicate_free(t: &Term) -> bool {
    let mut found = false;
    visit_term_preds(t, &mut |_, _| found = true);
    !found
}
