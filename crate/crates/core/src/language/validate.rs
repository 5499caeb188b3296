use serde::Serialize;

use crate::language::ast::{Formula, Term};
use crate::structure::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    NonGroundBound,
    UnboundVariable,
    UnknownPredicate,
    Arity,
    Sort,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub message: String,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sort {
    Ur,
    List,
    Any,
}

fn sort_of(t: &Term) -> Sort {
    match t {
        Term::Ur(_) => Sort::Ur,
        Term::Nil | Term::List(_) | Term::Tail(_) | Term::Cons(..) | Term::Conc(..) => Sort::List,
        _ => Sort::Any,
    }
}

struct Validator<'a> {
    sig: &'a Signature,
    scope: Vec<String>,
    out: Vec<Diagnostic>,
}

impl Validator<'_> {
    fn report(&mut self, kind: DiagnosticKind, message: String) {
        self.out.push(Diagnostic { kind, message });
    }

    fn need_list(&mut self, t: &Term, position: &str) {
        if sort_of(t) == Sort::Ur {
            self.report(
                DiagnosticKind::Sort,
                format!("{position} must be a list, found urelement {t}"),
            );
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Nil | Term::Ur(_) => {}
            Term::Var(x) => {
                if !self.scope.contains(x) {
                    self.report(DiagnosticKind::UnboundVariable, format!("variable ${x} is not bound"));
                }
            }
            Term::List(ts) => ts.iter().for_each(|t| self.term(t)),
            Term::Head(a) | Term::Tail(a) => {
                self.need_list(a, "argument of head/tail");
                self.term(a);
            }
            Term::Cons(a, b) => {
                self.need_list(a, "first argument of cons");
                self.term(a);
                self.term(b);
            }
            Term::Conc(a, b) => {
                self.need_list(a, "argument of conc");
                self.need_list(b, "argument of conc");
                self.term(a);
                self.term(b);
            }
            Term::BSearch { var, body, bound, .. } => {
                self.need_list(bound, "bSearch bound");
                self.term(bound);
                self.scope.push(var.clone());
                self.formula(body);
                self.scope.pop();
            }
            Term::Iter { base, var, step, .. } => {
                self.term(base);
                self.scope.push(var.clone());
                self.term(step);
                self.scope.pop();
            }
            Term::Rec {
                base,
                acc,
                elem,
                step,
                bound,
            } => {
                self.need_list(bound, "recursion bound");
                self.term(base);
                self.term(bound);
                self.scope.push(acc.clone());
                self.scope.push(elem.clone());
                self.term(step);
                self.scope.truncate(self.scope.len() - 2);
            }
        }
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Eq(a, b) => {
                self.term(a);
                self.term(b);
            }
            Formula::Mem(a, b) | Formula::Seg(a, b) => {
                self.need_list(b, "right side of in/sub");
                self.term(a);
                self.term(b);
            }
            Formula::Pred(name, args) => {
                match self.sig.arity(name) {
                    None => self.report(
                        DiagnosticKind::UnknownPredicate,
                        format!("predicate {name} is not declared"),
                    ),
                    Some(n) if n != args.len() => self.report(
                        DiagnosticKind::Arity,
                        format!("predicate {name} has arity {n}, applied to {} arguments", args.len()),
                    ),
                    Some(_) => {}
                }
                args.iter().for_each(|t| self.term(t));
            }
            Formula::Not(g) => self.formula(g),
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.formula(a);
                self.formula(b);
            }
            Formula::Quant { var, bound, body, .. } => {
                if !bound.is_ground() {
                    self.report(
                        DiagnosticKind::NonGroundBound,
                        format!("quantifier bound {bound} is not variable-free"),
                    );
                }
                self.need_list(bound, "quantifier bound");
                self.term(bound);
                self.scope.push(var.clone());
                self.formula(body);
                self.scope.pop();
            }
        }
    }
}

/// Static checks on a closed formula; returns every problem found.
pub fn validate(f: &Formula, sig: &Signature) -> Vec<Diagnostic> {
    let mut v = Validator {
        sig,
        scope: Vec::new(),
        out: Vec::new(),
    };
    v.formula(f);
    v.out
}

/// Static checks on a term whose free variables are `free`.
pub fn validate_term(t: &Term, sig: &Signature, free: &[String]) -> Vec<Diagnostic> {
    let mut v = Validator {
        sig,
        scope: free.to_vec(),
        out: Vec::new(),
    };
    v.term(t);
    v.out
}
