//! Satisfiability over list superstructures by grounding and DPLL.

mod dpll;
mod ground;
mod prop;

pub use dpll::{dpll, dpll_with_stats, solve_cnf, Cnf, DpllStats, Lit};
pub use ground::{
    check_fragment, ground_to_prop, ground_to_prop_with, GroundConfig, Grounding, DEFAULT_EXPANSION_BUDGET,
};
pub use prop::{Assignment, AtomMap, GroundAtom, PropFormula};

use std::collections::BTreeSet;

use crate::error::Result;
use crate::language::Formula;
use crate::structure::{Signature, Structure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatVerdict {
    /// A structure satisfying the formula: predicates hold exactly on the
    /// atoms made true by the model.
    Sat(Structure),
    Unsat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SatStats {
    pub atoms: usize,
    pub instances: u64,
    pub clauses: usize,
    pub variables: usize,
    pub decisions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatReport {
    pub verdict: SatVerdict,
    pub stats: SatStats,
}

impl SatReport {
    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, SatVerdict::Sat(_))
    }

    pub fn witness(&self) -> Option<&Structure> {
        match &self.verdict {
            SatVerdict::Sat(s) => Some(s),
            SatVerdict::Unsat => None,
        }
    }
}

pub fn sat_check(f: &Formula) -> Result<SatReport> {
    sat_check_with(f, GroundConfig::default())
}

pub fn sat_check_with(f: &Formula, config: GroundConfig) -> Result<SatReport> {
    let sig = Signature::infer(f)?;
    let g = ground_to_prop_with(f, config)?;
    let cnf = Cnf::from_prop(&g.formula, g.atoms.len());
    let (model, dstats) = solve_cnf(&cnf);
    let stats = SatStats {
        atoms: g.atoms.len(),
        instances: g.instances,
        clauses: cnf.clauses.len(),
        variables: cnf.num_vars,
        decisions: dstats.decisions,
    };
    let Some(model) = model else {
        return Ok(SatReport {
            verdict: SatVerdict::Unsat,
            stats,
        });
    };
    let assignment = Assignment(model[..cnf.num_atoms].to_vec());
    debug_assert!(g.formula.eval(&assignment.0));
    Ok(SatReport {
        verdict: SatVerdict::Sat(witness(&sig, &g.atoms, &assignment)?),
        stats,
    })
}

/// The closed-world structure making exactly the true atoms hold.
pub fn witness(sig: &Signature, atoms: &AtomMap, a: &Assignment) -> Result<Structure> {
    let mut urs: BTreeSet<String> = sig.urelements().clone();
    for id in a.true_atoms() {
        for v in &atoms.atom(id).args {
            v.urelements(&mut urs);
        }
    }
    let mut s = Structure::new(urs);
    for (name, arity) in sig.predicates() {
        s.declare_predicate(name, arity)?;
    }
    for id in a.true_atoms() {
        let atom = atoms.atom(id);
        s.insert(&atom.predicate, atom.args.clone())?;
    }
    Ok(s)
}
