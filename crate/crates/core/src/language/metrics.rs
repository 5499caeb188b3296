//! Syntactic measures: rank, flat/explicit classification and size.

use crate::language::ast::{Formula, Numeral, Term};

/// Nesting depth of non-standard terms; 0 for Δ₀ terms.
pub fn rank(t: &Term) -> usize {
    match t {
        Term::Nil | Term::Ur(_) | Term::Var(_) => 0,
        Term::List(ts) => ts.iter().map(rank).max().unwrap_or(0),
        Term::Head(t) | Term::Tail(t) => rank(t),
        Term::Cons(a, b) | Term::Conc(a, b) => rank(a).max(rank(b)),
        Term::BSearch { body, bound, .. } => formula_rank(body).max(rank(bound)) + 1,
        Term::Iter { base, step, .. } => rank(base).max(rank(step)) + 1,
        Term::Rec { base, step, bound, .. } => rank(base).max(rank(step)).max(rank(bound)) + 1,
    }
}

/// Maximum rank of the terms occurring in the formula.
pub fn formula_rank(f: &Formula) -> usize {
    match f {
        Formula::True | Formula::False => 0,
        Formula::Eq(a, b) | Formula::Mem(a, b) | Formula::Seg(a, b) => rank(a).max(rank(b)),
        Formula::Pred(_, args) => args.iter().map(rank).max().unwrap_or(0),
        Formula::Not(g) => formula_rank(g),
        Formula::And(a, b) | Formula::Or(a, b) => formula_rank(a).max(formula_rank(b)),
        Formula::Quant { bound, body, .. } => rank(bound).max(formula_rank(body)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Classification {
    /// Every Iter/Rec has Δ₀ base and step.
    pub is_flat: bool,
    /// Every Rec has a variable-free bound.
    pub is_explicit: bool,
}

impl Classification {
    const BOTH: Classification = Classification {
        is_flat: true,
        is_explicit: true,
    };

    fn meet(self, other: Classification) -> Classification {
        Classification {
            is_flat: self.is_flat && other.is_flat,
            is_explicit: self.is_explicit && other.is_explicit,
        }
    }
}

fn node_class(node: &Term) -> Classification {
    match node {
        Term::Iter { base, step, .. } => Classification {
            is_flat: base.is_standard() && step.is_standard(),
            is_explicit: true,
        },
        Term::Rec { base, step, bound, .. } => Classification {
            is_flat: base.is_standard() && step.is_standard(),
            is_explicit: bound.is_ground(),
        },
        _ => Classification::BOTH,
    }
}

pub fn classify(t: &Term) -> Classification {
    let mut c = Classification::BOTH;
    t.visit(&mut |node| c = c.meet(node_class(node)));
    c
}

/// A formula is flat (explicit) iff every term in it is.
pub fn classify_formula(f: &Formula) -> Classification {
    let mut c = Classification::BOTH;
    f.visit_terms(&mut |node| c = c.meet(node_class(node)));
    c
}

/// Characters contributed by an iteration count written in the given numeral system.
pub fn numeral_size(count: u64, numeral: Numeral) -> usize {
    match numeral {
        Numeral::Unary => count as usize,
        Numeral::Binary => (u64::BITS - count.leading_zeros()) as usize,
    }
}

/// Length of the canonical string, with iteration counts measured in
/// their declared numeral system instead of decimal.
pub fn size(t: &Term) -> usize {
    let mut adj: isize = 0;
    t.visit(&mut |node| adj += iter_delta(node));
    (t.to_string().len() as isize + adj) as usize
}

pub fn formula_size(f: &Formula) -> usize {
    let mut adj: isize = 0;
    f.visit_terms(&mut |node| adj += iter_delta(node));
    (f.to_string().len() as isize + adj) as usize
}

fn iter_delta(node: &Term) -> isize {
    match node {
        Term::Iter { count, numeral, .. } => numeral_size(*count, *numeral) as isize - count.to_string().len() as isize,
        _ => 0,
    }
}
