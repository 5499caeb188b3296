//! Clause form and a DPLL search.

use crate::sat::prop::{Assignment, PropFormula};

/// A literal is `+(v+1)` or `-(v+1)` for variable `v`.
pub type Lit = i64;

fn var(l: Lit) -> usize {
    (l.unsigned_abs() - 1) as usize
}

fn lit(v: usize, positive: bool) -> Lit {
    let l = v as Lit + 1;
    if positive {
        l
    } else {
        -l
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    /// Variables `0..num_atoms` are the formula's atoms, the rest are
    /// definitions introduced by the translation.
    pub num_atoms: usize,
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    /// Equisatisfiable clause form. Top-level conjuncts that are already
    /// clauses are kept as they are; other subformulas get a defining
    /// variable constrained in both directions.
    pub fn from_prop(p: &PropFormula, num_atoms: usize) -> Cnf {
        let num_atoms = num_atoms.max(p.atom_bound());
        let mut cnf = Cnf {
            num_atoms,
            num_vars: num_atoms,
            clauses: Vec::new(),
        };
        let conjuncts: Vec<&PropFormula> = match p {
            PropFormula::And(ps) => ps.iter().collect(),
            p => vec![p],
        };
        for c in conjuncts {
            match c {
                PropFormula::Const(true) => {}
                PropFormula::Const(false) => cnf.clauses.push(Vec::new()),
                _ => {
                    if let Some(clause) = as_clause(c) {
                        cnf.clauses.push(clause);
                    } else {
                        let l = cnf.define(c);
                        cnf.clauses.push(vec![l]);
                    }
                }
            }
        }
        cnf
    }

    fn fresh(&mut self) -> usize {
        self.num_vars += 1;
        self.num_vars - 1
    }

    fn define(&mut self, p: &PropFormula) -> Lit {
        match p {
            PropFormula::Atom(i) => lit(*i, true),
            PropFormula::Not(q) => -self.define(q),
            PropFormula::Const(b) => {
                let v = self.fresh();
                self.clauses.push(vec![lit(v, *b)]);
                lit(v, true)
            }
            PropFormula::And(ps) | PropFormula::Or(ps) => {
                let is_and = matches!(p, PropFormula::And(_));
                let kids: Vec<Lit> = ps.iter().map(|q| self.define(q)).collect();
                let v = lit(self.fresh(), true);
                // and: v -> k for each k, and (all k) -> v; or is the dual
                let sign = if is_and { 1 } else { -1 };
                for &k in &kids {
                    self.clauses.push(vec![-v * sign, k * sign]);
                }
                let mut big: Vec<Lit> = kids.iter().map(|&k| -k * sign).collect();
                big.push(v * sign);
                self.clauses.push(big);
                v
            }
        }
    }
}

fn as_literal(p: &PropFormula) -> Option<Lit> {
    match p {
        PropFormula::Atom(i) => Some(lit(*i, true)),
        PropFormula::Not(q) => as_literal(q).map(|l| -l),
        _ => None,
    }
}

fn as_clause(p: &PropFormula) -> Option<Vec<Lit>> {
    match p {
        PropFormula::Or(ps) => ps.iter().map(as_literal).collect(),
        p => as_literal(p).map(|l| vec![l]),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DpllStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

struct Solver<'c> {
    clauses: &'c [Vec<Lit>],
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
    stats: DpllStats,
}

enum Status {
    Conflict,
    Open,
    Satisfied,
}

impl Solver<'_> {
    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.value[var(l)].map(|b| b == (l > 0))
    }

    fn assign(&mut self, l: Lit) {
        self.value[var(l)] = Some(l > 0);
        self.trail.push(var(l));
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("nonempty trail");
            self.value[v] = None;
        }
    }

    /// Unit propagation followed by pure literal assignment, to a fixpoint.
    fn simplify(&mut self) -> Status {
        loop {
            let mut changed = false;
            let mut all_sat = true;
            for clause in self.clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut sat = false;
                for &l in clause {
                    match self.lit_value(l) {
                        Some(true) => {
                            sat = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open += 1;
                            unassigned = Some(l);
                        }
                    }
                }
                if sat {
                    continue;
                }
                all_sat = false;
                match open {
                    0 => {
                        self.stats.conflicts += 1;
                        return Status::Conflict;
                    }
                    1 => {
                        self.assign(unassigned.expect("one open literal"));
                        self.stats.propagations += 1;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if all_sat {
                return Status::Satisfied;
            }
            if changed {
                continue;
            }
            // polarity seen among unsatisfied clauses: bit 0 positive, bit 1 negative
            let mut polarity = vec![0u8; self.value.len()];
            for clause in self.clauses {
                if clause.iter().any(|&l| self.lit_value(l) == Some(true)) {
                    continue;
                }
                for &l in clause {
                    if self.value[var(l)].is_none() {
                        polarity[var(l)] |= if l > 0 { 1 } else { 2 };
                    }
                }
            }
            for (v, &p) in polarity.iter().enumerate() {
                if p == 1 || p == 2 {
                    self.assign(lit(v, p == 1));
                    changed = true;
                }
            }
            if !changed {
                return Status::Open;
            }
        }
    }

    fn search(&mut self) -> bool {
        match self.simplify() {
            Status::Conflict => return false,
            Status::Satisfied => return true,
            Status::Open => {}
        }
        let v = self
            .value
            .iter()
            .position(Option::is_none)
            .expect("open status leaves a variable unassigned");
        for choice in [true, false] {
            let mark = self.trail.len();
            self.stats.decisions += 1;
            self.assign(lit(v, choice));
            if self.search() {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Satisfying values for all `num_vars` variables, or `None`.
pub fn solve_cnf(cnf: &Cnf) -> (Option<Vec<bool>>, DpllStats) {
    let mut s = Solver {
        clauses: &cnf.clauses,
        value: vec![None; cnf.num_vars],
        trail: Vec::new(),
        stats: DpllStats::default(),
    };
    let ok = s.search();
    let stats = s.stats;
    if ok {
        (Some(s.value.into_iter().map(|v| v.unwrap_or(false)).collect()), stats)
    } else {
        (None, stats)
    }
}

/// Decides a propositional formula; a model assigns every atom below
/// `max(num_atoms, atom_bound)`.
pub fn dpll(p: &PropFormula, num_atoms: usize) -> Option<Assignment> {
    dpll_with_stats(p, num_atoms).0
}

pub fn dpll_with_stats(p: &PropFormula, num_atoms: usize) -> (Option<Assignment>, DpllStats) {
    let cnf = Cnf::from_prop(p, num_atoms);
    let (model, stats) = solve_cnf(&cnf);
    let model = model.map(|mut m| {
        m.truncate(cnf.num_atoms);
        Assignment(m)
    });
    debug_assert!(model.as_ref().is_none_or(|a| p.eval(&a.0)));
    (model, stats)
}
