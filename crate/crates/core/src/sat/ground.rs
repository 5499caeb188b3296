//! Grounding: quantifier expansion and propositional abstraction.

use crate::error::{Error, Result};
use crate::eval::{Env, EvalConfig, Evaluator};
use crate::language::{term_is_predicate_free, Formula, Quantifier, Term};
use crate::sat::prop::{AtomMap, GroundAtom, PropFormula};
use crate::structure::Structure;
use crate::value::{self, Value};

pub const DEFAULT_EXPANSION_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundConfig {
    /// Maximum number of quantifier bindings made during expansion.
    pub expansion_budget: u64,
    pub step_budget: u64,
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig {
            expansion_budget: DEFAULT_EXPANSION_BUDGET,
            step_budget: crate::eval::DEFAULT_STEP_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grounding {
    pub formula: PropFormula,
    pub atoms: AtomMap,
    /// Quantifier-free instances produced by the expansion.
    pub instances: u64,
    pub bindings: u64,
}

/// Rejects formulas outside the fragment that grounding handles soundly.
pub fn check_fragment(f: &Formula) -> Result<()> {
    if let Some(x) = f.free_vars().into_iter().next() {
        return Err(Error::Precondition(format!("formula is not closed: ${x} is free")));
    }
    let mut problem = None;
    let mut note = |msg: String| {
        if problem.is_none() {
            problem = Some(msg);
        }
    };
    f.visit_terms(&mut |t| {
        t.visit(&mut |s| match s {
            Term::Iter { base, step, .. } if !base.is_standard() || !step.is_standard() => {
                note(format!("iterative term is not flat: {s}"))
            }
            Term::Rec { base, step, bound, .. } => {
                if !base.is_standard() || !step.is_standard() {
                    note(format!("recursive term is not flat: {s}"));
                } else if !bound.is_ground() {
                    note(format!("recursive term is not explicit: {s}"));
                }
            }
            Term::BSearch { .. } if !term_is_predicate_free(s) => {
                note(format!("bounded search mentions predicates: {s}"))
            }
            _ => {}
        })
    });
    quant_bounds(f, &mut note);
    match problem {
        Some(m) => Err(Error::Precondition(m)),
        None => Ok(()),
    }
}

fn quant_bounds(f: &Formula, note: &mut dyn FnMut(String)) {
    match f {
        Formula::Not(g) => quant_bounds(g, note),
        Formula::And(a, b) | Formula::Or(a, b) => {
            quant_bounds(a, note);
            quant_bounds(b, note);
        }
        Formula::Quant { bound, body, .. } => {
            if !bound.is_ground() {
                note(format!("quantifier bound is not variable-free: {bound}"));
            }
            quant_bounds(body, note);
        }
        _ => {}
    }
}

struct Grounder {
    structure: Structure,
    eval_config: EvalConfig,
    config: GroundConfig,
    atoms: AtomMap,
    instances: u64,
    bindings: u64,
}

impl Grounder {
    fn eval(&self, t: &Term, env: &Env) -> Result<Value> {
        Ok(Evaluator::new(&self.structure)
            .with_config(self.eval_config)
            .eval(t, env)?
            .value)
    }

    fn formula(&mut self, f: &Formula, env: &mut Env) -> Result<PropFormula> {
        Ok(match f {
            Formula::True => PropFormula::Const(true),
            Formula::False => PropFormula::Const(false),
            Formula::Eq(a, b) => PropFormula::Const(self.eval(a, env)? == self.eval(b, env)?),
            Formula::Mem(a, b) => PropFormula::Const(value::mem(&self.eval(a, env)?, &self.eval(b, env)?)?),
            Formula::Seg(a, b) => PropFormula::Const(value::initseg(&self.eval(a, env)?, &self.eval(b, env)?)?),
            Formula::Pred(name, args) => {
                let args = args.iter().map(|t| self.eval(t, env)).collect::<Result<Vec<_>>>()?;
                PropFormula::Atom(self.atoms.intern(GroundAtom {
                    predicate: name.clone(),
                    args,
                }))
            }
            Formula::Not(g) => self.formula(g, env)?.negate(),
            Formula::And(a, b) => {
                let l = self.formula(a, env)?;
                let r = self.formula(b, env)?;
                PropFormula::and_all([l, r])
            }
            Formula::Or(a, b) => {
                let l = self.formula(a, env)?;
                let r = self.formula(b, env)?;
                PropFormula::or_all([l, r])
            }
            Formula::Quant {
                kind,
                var,
                mode,
                bound,
                body,
            } => {
                let l = self.eval(bound, env)?;
                let candidates: Vec<Value> = match mode {
                    crate::language::Mode::In => l.expect_list("quantifier bound")?.to_vec(),
                    crate::language::Mode::Seg => value::segments(&l)?.collect(),
                };
                let is_instance = !matches!(**body, Formula::Quant { .. });
                let shadowed = env.remove(var);
                let mut parts = Vec::with_capacity(candidates.len());
                for cand in candidates {
                    self.bindings += 1;
                    if self.bindings > self.config.expansion_budget {
                        return Err(Error::Budget {
                            what: "quantifier expansion",
                            limit: self.config.expansion_budget,
                        });
                    }
                    if is_instance {
                        self.instances += 1;
                    }
                    env.insert(var.clone(), cand);
                    parts.push(self.formula(body, env)?);
                }
                env.remove(var);
                if let Some(v) = shadowed {
                    env.insert(var.clone(), v);
                }
                match kind {
                    Quantifier::Forall => PropFormula::and_all(parts),
                    Quantifier::Exists => PropFormula::or_all(parts),
                }
            }
        })
    }
}

/// Replaces every maximal variable-free subterm by its value.
fn fold_ground_terms(f: &Formula, g: &Grounder) -> Result<Formula> {
    let term = |t: &Term| -> Result<Term> { fold_term(t, g) };
    Ok(match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Eq(a, b) => Formula::Eq(term(a)?, term(b)?),
        Formula::Mem(a, b) => Formula::Mem(term(a)?, term(b)?),
        Formula::Seg(a, b) => Formula::Seg(term(a)?, term(b)?),
        Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(term).collect::<Result<_>>()?),
        Formula::Not(h) => Formula::not(fold_ground_terms(h, g)?),
        Formula::And(a, b) => Formula::and(fold_ground_terms(a, g)?, fold_ground_terms(b, g)?),
        Formula::Or(a, b) => Formula::or(fold_ground_terms(a, g)?, fold_ground_terms(b, g)?),
        Formula::Quant {
            kind,
            var,
            mode,
            bound,
            body,
        } => Formula::quant(*kind, var, *mode, term(bound)?, fold_ground_terms(body, g)?),
    })
}

fn fold_term(t: &Term, g: &Grounder) -> Result<Term> {
    if t.is_ground() && !matches!(t, Term::Nil | Term::Ur(_)) {
        return Ok(Term::from_value(&g.eval(t, &Env::new())?));
    }
    Ok(match t {
        Term::Head(a) => Term::head(fold_term(a, g)?),
        Term::Tail(a) => Term::tail(fold_term(a, g)?),
        Term::Cons(a, b) => Term::cons(fold_term(a, g)?, fold_term(b, g)?),
        Term::Conc(a, b) => Term::conc(fold_term(a, g)?, fold_term(b, g)?),
        Term::List(ts) => Term::List(ts.iter().map(|t| fold_term(t, g)).collect::<Result<_>>()?),
        _ => t.clone(),
    })
}

pub fn ground_to_prop(f: &Formula) -> Result<Grounding> {
    ground_to_prop_with(f, GroundConfig::default())
}

pub fn ground_to_prop_with(f: &Formula, config: GroundConfig) -> Result<Grounding> {
    check_fragment(f)?;
    let mut g = Grounder {
        structure: Structure::empty(),
        eval_config: EvalConfig {
            step_budget: config.step_budget,
            parallel: false,
            ..EvalConfig::default()
        },
        config,
        atoms: AtomMap::default(),
        instances: 0,
        bindings: 0,
    };
    let folded = fold_ground_terms(f, &g)?;
    let formula = g.formula(&folded, &mut Env::new())?;
    Ok(Grounding {
        formula,
        atoms: g.atoms,
        instances: g.instances,
        bindings: g.bindings,
    })
}
