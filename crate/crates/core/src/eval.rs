//! Term evaluation and model checking by bounded quantifier elimination.
//!
//! Quantifiers are eliminated by enumerating the candidates of their
//! (ground) bound one at a time and evaluating the body under each
//! selected value. Recursion and iteration are evaluated as explicit
//! loops, so evaluation depth does not grow with list length.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::{Formula, Mode, Quantifier, Term};
use crate::structure::Structure;
use crate::value::{self, Value};

/// Variable bindings supplied by a caller.
pub type Env = BTreeMap<String, Value>;

pub const DEFAULT_STEP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EvalConfig {
    /// Maximum number of list operations, loop steps and bindings per call.
    pub step_budget: u64,
    /// Expand quantifiers with many candidates on the rayon pool. Has no
    /// effect when the crate is built without the `parallel` feature or
    /// when the current pool has a single thread.
    pub parallel: bool,
    /// Smallest candidate set that is expanded in parallel.
    pub par_threshold: usize,
    /// Stop a quantifier or connective as soon as its value is known.
    /// Off by default so that counters reflect the full enumeration.
    /// Only sequential expansions short-circuit.
    pub short_circuit: bool,
    /// Evaluate variable-free subterms of a checked formula once up front.
    pub cache_ground_terms: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            step_budget: DEFAULT_STEP_BUDGET,
            parallel: true,
            par_threshold: 16,
            short_circuit: false,
            cache_ground_terms: true,
        }
    }
}

impl EvalConfig {
    pub fn sequential() -> Self {
        EvalConfig {
            parallel: false,
            ..EvalConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Quantifier bodies evaluated under a selected value, where the body
    /// is not itself a quantifier. For a prenex formula this is the number
    /// of ground instances of the matrix.
    pub substitutions: u64,
    /// Individual candidate selections at every quantifier.
    pub bindings: u64,
    /// Atomic formulas evaluated.
    pub atoms: u64,
    /// Applications of a recursive term's step.
    pub rec_steps: u64,
    /// Applications of an iterative term's step.
    pub iter_steps: u64,
    /// Candidates tested by bounded search terms.
    pub bsearch_candidates: u64,
    /// List operations (head, tail, cons, conc, comparisons).
    pub ops: u64,
}

impl Counters {
    pub fn merge(&mut self, o: &Counters) {
        self.substitutions += o.substitutions;
        self.bindings += o.bindings;
        self.atoms += o.atoms;
        self.rec_steps += o.rec_steps;
        self.iter_steps += o.iter_steps;
        self.bsearch_candidates += o.bsearch_candidates;
        self.ops += o.ops;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub verdict: bool,
    pub counters: Counters,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalReport {
    pub value: Value,
    pub counters: Counters,
}

pub struct Evaluator<'s> {
    structure: &'s Structure,
    config: EvalConfig,
}

impl<'s> Evaluator<'s> {
    pub fn new(structure: &'s Structure) -> Self {
        Evaluator {
            structure,
            config: EvalConfig::default(),
        }
    }

    pub fn with_config(mut self, config: EvalConfig) -> Self {
        self.config = config;
        self
    }

    pub fn config(&self) -> &EvalConfig {
        &self.config
    }

    pub fn eval(&self, t: &Term, env: &Env) -> Result<EvalReport> {
        let ctx = Ctx::new(self.structure, self.config);
        let mut stack: Vec<(&str, Value)> = env.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        let mut counters = Counters::default();
        let value = ctx.term(t, &mut stack, &mut counters)?;
        Ok(EvalReport { value, counters })
    }

    pub fn check(&self, f: &Formula) -> Result<CheckReport> {
        self.check_in(f, &Env::new())
    }

    /// Checks a formula whose free variables are bound by `env`.
    pub fn check_in(&self, f: &Formula, env: &Env) -> Result<CheckReport> {
        let mut ctx = Ctx::new(self.structure, self.config);
        let mut counters = Counters::default();
        if self.config.cache_ground_terms {
            ctx.precompute(f, &mut counters);
        }
        let mut stack: Vec<(&str, Value)> = env.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
        let verdict = ctx.formula(f, &mut stack, &mut counters)?;
        Ok(CheckReport { verdict, counters })
    }
}

/// Evaluates `t` under `env` in `s` with default settings.
pub fn eval_term(t: &Term, env: &Env, s: &Structure) -> Result<Value> {
    Ok(Evaluator::new(s).eval(t, env)?.value)
}

/// Decides `s ⊨ f` for a closed formula with default settings.
pub fn check(f: &Formula, s: &Structure) -> Result<CheckReport> {
    Evaluator::new(s).check(f)
}

type Stack<'a> = Vec<(&'a str, Value)>;

struct Cached {
    value: Value,
    /// Hash index over the elements, for long lists used on the right of `in`.
    members: Option<HashSet<Value>>,
}

const INDEX_THRESHOLD: usize = 32;

struct Ctx<'s> {
    structure: &'s Structure,
    config: EvalConfig,
    ops: AtomicU64,
    cache: HashMap<usize, Cached>,
}

fn key(t: &Term) -> usize {
    t as *const Term as usize
}

impl<'s> Ctx<'s> {
    fn new(structure: &'s Structure, config: EvalConfig) -> Self {
        Ctx {
            structure,
            config,
            ops: AtomicU64::new(0),
            cache: HashMap::new(),
        }
    }

    fn tick(&self, c: &mut Counters, n: u64) -> Result<()> {
        c.ops += n;
        let used = self.ops.fetch_add(n, Ordering::Relaxed) + n;
        if used > self.config.step_budget {
            return Err(Error::Budget {
                what: "evaluation steps",
                limit: self.config.step_budget,
            });
        }
        Ok(())
    }

    fn lookup(env: &Stack<'_>, x: &str) -> Result<Value> {
        env.iter()
            .rev()
            .find(|(k, _)| *k == x)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::UnboundVariable(x.to_string()))
    }

    // Ground-term cache

    fn precompute(&mut self, f: &Formula, c: &mut Counters) {
        let mut roots = Vec::new();
        collect_ground_roots_formula(f, &mut roots);
        for t in roots {
            let mut stack = Vec::new();
            // failures are left for the regular evaluation path to report
            if let Ok(v) = self.term(t, &mut stack, c) {
                self.cache.insert(
                    key(t),
                    Cached {
                        value: v,
                        members: None,
                    },
                );
            }
        }
        let mut mem_rhs = Vec::new();
        collect_mem_rhs(f, &mut mem_rhs);
        for t in mem_rhs {
            if let Some(entry) = self.cache.get_mut(&key(t)) {
                if let Value::List(elems) = &entry.value {
                    if elems.len() >= INDEX_THRESHOLD && entry.members.is_none() {
                        entry.members = Some(elems.iter().cloned().collect());
                    }
                }
            }
        }
    }

    fn cached(&self, t: &Term) -> Option<&Cached> {
        if self.cache.is_empty() {
            None
        } else {
            self.cache.get(&key(t))
        }
    }

    // Terms

    fn term<'a>(&self, t: &'a Term, env: &mut Stack<'a>, c: &mut Counters) -> Result<Value> {
        if let Some(hit) = self.cached(t) {
            return Ok(hit.value.clone());
        }
        match t {
            Term::Nil => Ok(Value::nil()),
            Term::Ur(n) => Ok(Value::ur(n)),
            Term::Var(x) => Self::lookup(env, x),
            Term::List(ts) => {
                let elems = ts.iter().map(|t| self.term(t, env, c)).collect::<Result<Vec<_>>>()?;
                Ok(Value::list(elems))
            }
            Term::Head(a) => {
                let v = self.term(a, env, c)?;
                self.tick(c, 1)?;
                value::head(&v)
            }
            Term::Tail(a) => {
                let v = self.term(a, env, c)?;
                self.tick(c, 1)?;
                value::tail(&v)
            }
            Term::Cons(a, b) => {
                let l = self.term(a, env, c)?;
                let x = self.term(b, env, c)?;
                self.tick(c, 1)?;
                value::cons(&l, &x)
            }
            Term::Conc(a, b) => {
                let l1 = self.term(a, env, c)?;
                let l2 = self.term(b, env, c)?;
                self.tick(c, 1)?;
                value::conc(&l1, &l2)
            }
            Term::BSearch { mode, var, body, bound } => {
                let l = self.term(bound, env, c)?;
                let candidates: Box<dyn Iterator<Item = Value>> = match mode {
                    Mode::In => Box::new(l.expect_list("bsearch_in")?.to_vec().into_iter()),
                    Mode::Seg => Box::new(value::segments(&l)?),
                };
                for cand in candidates {
                    c.bsearch_candidates += 1;
                    self.tick(c, 1)?;
                    env.push((var, cand));
                    let holds = self.formula(body, env, c);
                    let (_, cand) = env.pop().expect("pushed above");
                    if holds? {
                        return Ok(cand);
                    }
                }
                Ok(l)
            }
            Term::Iter {
                count, base, var, step, ..
            } => {
                let mut acc = self.term(base, env, c)?;
                for _ in 0..*count {
                    c.iter_steps += 1;
                    self.tick(c, 1)?;
                    env.push((var, acc));
                    let next = self.term(step, env, c);
                    env.pop();
                    acc = next?;
                }
                Ok(acc)
            }
            Term::Rec {
                base,
                acc,
                elem,
                step,
                bound,
            } => {
                let l = self.term(bound, env, c)?;
                let elems = l.expect_list("rec")?;
                let mut g = self.term(base, env, c)?;
                if let Some((append, rest)) = appending_step(acc, elem, step) {
                    if let Value::List(start) = &g {
                        return self.rec_append(start, append, rest, elem, elems, env, c);
                    }
                }
                // segment chain nil, [e1], [e1,e2], ...: each step adds one element
                for b in elems.iter() {
                    c.rec_steps += 1;
                    self.tick(c, 1)?;
                    env.push((acc, g));
                    env.push((elem, b.clone()));
                    let next = self.term(step, env, c);
                    env.pop();
                    env.pop();
                    g = next?;
                }
                Ok(g)
            }
        }
    }

    /// A recursion whose step only extends the accumulator, evaluated into
    /// one growing buffer instead of copying the accumulator at every step.
    #[allow(clippy::too_many_arguments)]
    fn rec_append<'a>(
        &self,
        start: &[Value],
        append: Append,
        rest: &'a Term,
        elem: &'a str,
        elems: &[Value],
        env: &mut Stack<'a>,
        c: &mut Counters,
    ) -> Result<Value> {
        let mut buf = start.to_vec();
        for b in elems {
            c.rec_steps += 1;
            self.tick(c, 1)?;
            env.push((elem, b.clone()));
            let piece = self.term(rest, env, c);
            env.pop();
            let piece = piece?;
            self.tick(c, 1)?;
            match append {
                Append::Cons => buf.push(piece),
                Append::Conc => buf.extend_from_slice(piece.expect_list("conc")?),
            }
        }
        Ok(Value::list(buf))
    }

    // Formulas

    fn formula<'a>(&self, f: &'a Formula, env: &mut Stack<'a>, c: &mut Counters) -> Result<bool> {
        match f {
            Formula::True => Ok(true),
            Formula::False => Ok(false),
            Formula::Eq(a, b) => {
                c.atoms += 1;
                let x = self.term(a, env, c)?;
                let y = self.term(b, env, c)?;
                self.tick(c, 1)?;
                Ok(x == y)
            }
            Formula::Mem(a, b) => {
                c.atoms += 1;
                let x = self.term(a, env, c)?;
                self.tick(c, 1)?;
                if let Some(Cached {
                    members: Some(index), ..
                }) = self.cached(b)
                {
                    return Ok(index.contains(&x));
                }
                let l = self.term(b, env, c)?;
                value::mem(&x, &l)
            }
            Formula::Seg(a, b) => {
                c.atoms += 1;
                let x = self.term(a, env, c)?;
                let l = self.term(b, env, c)?;
                self.tick(c, 1)?;
                value::initseg(&x, &l)
            }
            Formula::Pred(name, args) => {
                c.atoms += 1;
                let vals = args.iter().map(|t| self.term(t, env, c)).collect::<Result<Vec<_>>>()?;
                self.tick(c, 1)?;
                self.structure.atom_holds(name, &vals)
            }
            Formula::Not(g) => Ok(!self.formula(g, env, c)?),
            Formula::And(a, b) => {
                let l = self.formula(a, env, c)?;
                if !l && self.config.short_circuit {
                    return Ok(false);
                }
                let r = self.formula(b, env, c)?;
                Ok(l && r)
            }
            Formula::Or(a, b) => {
                let l = self.formula(a, env, c)?;
                if l && self.config.short_circuit {
                    return Ok(true);
                }
                let r = self.formula(b, env, c)?;
                Ok(l || r)
            }
            Formula::Quant {
                kind,
                var,
                mode,
                bound,
                body,
            } => self.quantifier(*kind, var, *mode, bound, body, env, c),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn quantifier<'a>(
        &self,
        kind: Quantifier,
        var: &'a str,
        mode: Mode,
        bound: &'a Term,
        body: &'a Formula,
        env: &mut Stack<'a>,
        c: &mut Counters,
    ) -> Result<bool> {
        let l = self.term(bound, env, c)?;
        let elems = l.expect_list(match mode {
            Mode::In => "quantifier bound",
            Mode::Seg => "quantifier bound",
        })?;
        let is_instance = !matches!(body, Formula::Quant { .. });
        // ∀ over no candidates is true, ∃ is false
        let neutral = kind == Quantifier::Forall;

        #[cfg(feature = "parallel")]
        if self.config.parallel && elems.len() >= self.config.par_threshold.max(2) && rayon::current_num_threads() > 1 {
            return self.quantifier_par(kind, var, mode, &l, body, env, c, is_instance);
        }

        let mut result = neutral;
        let mut visit = |cand: Value, env: &mut Stack<'a>, c: &mut Counters| -> Result<bool> {
            c.bindings += 1;
            if is_instance {
                c.substitutions += 1;
            }
            self.tick(c, 1)?;
            env.push((var, cand));
            let holds = self.formula(body, env, c);
            env.pop();
            let holds = holds?;
            if holds != neutral {
                result = !neutral;
                // a witness (∃) or counterexample (∀) decides the quantifier
                return Ok(self.config.short_circuit);
            }
            Ok(false)
        };
        match mode {
            Mode::In => {
                for cand in elems.iter() {
                    if visit(cand.clone(), env, c)? {
                        break;
                    }
                }
            }
            Mode::Seg => {
                for cand in value::segments(&l)? {
                    if visit(cand, env, c)? {
                        break;
                    }
                }
            }
        }
        Ok(result)
    }

    #[cfg(feature = "parallel")]
    #[allow(clippy::too_many_arguments)]
    fn quantifier_par<'a>(
        &self,
        kind: Quantifier,
        var: &'a str,
        mode: Mode,
        l: &Value,
        body: &'a Formula,
        env: &Stack<'a>,
        c: &mut Counters,
        is_instance: bool,
    ) -> Result<bool> {
        use rayon::prelude::*;

        let candidates: Vec<Value> = match mode {
            Mode::In => l.expect_list("quantifier bound")?.to_vec(),
            Mode::Seg => value::segments(l)?.collect(),
        };
        let outcomes: Vec<(Result<bool>, Counters)> = candidates
            .into_par_iter()
            .map(|cand| {
                let mut local = Counters::default();
                let mut env = env.clone();
                local.bindings += 1;
                if is_instance {
                    local.substitutions += 1;
                }
                let r = self.tick(&mut local, 1).and_then(|_| {
                    env.push((var, cand));
                    self.formula(body, &mut env, &mut local)
                });
                (r, local)
            })
            .collect();
        let neutral = kind == Quantifier::Forall;
        let mut result = neutral;
        for (r, local) in outcomes {
            c.merge(&local);
            if r? != neutral {
                result = !neutral;
            }
        }
        Ok(result)
    }
}

#[derive(Clone, Copy)]
enum Append {
    Cons,
    Conc,
}

/// Recognizes steps `cons($g, t)` and `conc($g, t)` where `t` does not
/// mention the accumulator `$g`.
fn appending_step<'a>(acc: &str, elem: &str, step: &'a Term) -> Option<(Append, &'a Term)> {
    if acc == elem {
        return None;
    }
    let (kind, first, rest) = match step {
        Term::Cons(a, b) => (Append::Cons, a, b),
        Term::Conc(a, b) => (Append::Conc, a, b),
        _ => return None,
    };
    match &**first {
        Term::Var(g) if g == acc && !rest.free_vars().contains(acc) => Some((kind, rest)),
        _ => None,
    }
}

fn is_trivial_constant(t: &Term) -> bool {
    matches!(t, Term::Nil | Term::Ur(_) | Term::Var(_))
}

/// Maximal variable-free, non-trivial subterms of `t`.
fn collect_ground_roots<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
    if is_trivial_constant(t) {
        return;
    }
    if t.is_ground() {
        out.push(t);
        return;
    }
    match t {
        Term::Nil | Term::Ur(_) | Term::Var(_) => {}
        Term::List(ts) => ts.iter().for_each(|t| collect_ground_roots(t, out)),
        Term::Head(a) | Term::Tail(a) => collect_ground_roots(a, out),
        Term::Cons(a, b) | Term::Conc(a, b) => {
            collect_ground_roots(a, out);
            collect_ground_roots(b, out);
        }
        Term::BSearch { body, bound, .. } => {
            collect_ground_roots_formula(body, out);
            collect_ground_roots(bound, out);
        }
        Term::Iter { base, step, .. } => {
            collect_ground_roots(base, out);
            collect_ground_roots(step, out);
        }
        Term::Rec { base, step, bound, .. } => {
            collect_ground_roots(base, out);
            collect_ground_roots(step, out);
            collect_ground_roots(bound, out);
        }
    }
}

fn collect_ground_roots_formula<'a>(f: &'a Formula, out: &mut Vec<&'a Term>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Eq(a, b) | Formula::Mem(a, b) | Formula::Seg(a, b) => {
            collect_ground_roots(a, out);
            collect_ground_roots(b, out);
        }
        Formula::Pred(_, args) => args.iter().for_each(|t| collect_ground_roots(t, out)),
        Formula::Not(g) => collect_ground_roots_formula(g, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_ground_roots_formula(a, out);
            collect_ground_roots_formula(b, out);
        }
        Formula::Quant { bound, body, .. } => {
            collect_ground_roots(bound, out);
            collect_ground_roots_formula(body, out);
        }
    }
}

fn collect_mem_rhs<'a>(f: &'a Formula, out: &mut Vec<&'a Term>) {
    match f {
        Formula::Mem(_, b) => out.push(b),
        Formula::Not(g) => collect_mem_rhs(g, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_mem_rhs(a, out);
            collect_mem_rhs(b, out);
        }
        Formula::Quant { body, .. } => collect_mem_rhs(body, out),
        _ => {}
    }
}
