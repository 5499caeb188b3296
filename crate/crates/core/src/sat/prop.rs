use std::collections::HashMap;
use std::fmt;

use crate::value::Value;

/// A predicate applied to fully evaluated arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<Value>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Numbering of ground atoms by order of first occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomMap {
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, usize>,
}

impl AtomMap {
    pub fn intern(&mut self, atom: GroundAtom) -> usize {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = self.atoms.len();
        self.index.insert(atom.clone(), id);
        self.atoms.push(atom);
        id
    }

    pub fn id(&self, atom: &GroundAtom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn atom(&self, id: usize) -> &GroundAtom {
        &self.atoms[id]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &GroundAtom)> {
        self.atoms.iter().enumerate()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropFormula {
    Const(bool),
    Atom(usize),
    Not(Box<PropFormula>),
    And(Vec<PropFormula>),
    Or(Vec<PropFormula>),
}

impl PropFormula {
    /// Negation with constants and double negations folded.
    pub fn negate(self) -> PropFormula {
        match self {
            PropFormula::Const(b) => PropFormula::Const(!b),
            PropFormula::Not(p) => *p,
            p => PropFormula::Not(Box::new(p)),
        }
    }

    /// Conjunction with constants folded and nested conjunctions flattened.
    pub fn and_all(parts: impl IntoIterator<Item = PropFormula>) -> PropFormula {
        Self::junction(parts, true)
    }

    pub fn or_all(parts: impl IntoIterator<Item = PropFormula>) -> PropFormula {
        Self::junction(parts, false)
    }

    fn junction(parts: impl IntoIterator<Item = PropFormula>, is_and: bool) -> PropFormula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                PropFormula::Const(b) if b == is_and => {}
                PropFormula::Const(_) => return PropFormula::Const(!is_and),
                PropFormula::And(ps) if is_and => out.extend(ps),
                PropFormula::Or(ps) if !is_and => out.extend(ps),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => PropFormula::Const(is_and),
            1 => out.pop().expect("one element"),
            _ if is_and => PropFormula::And(out),
            _ => PropFormula::Or(out),
        }
    }

    /// Truth value under an assignment indexed by atom id; atoms beyond the
    /// assignment count as false.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        match self {
            PropFormula::Const(b) => *b,
            PropFormula::Atom(i) => assignment.get(*i).copied().unwrap_or(false),
            PropFormula::Not(p) => !p.eval(assignment),
            PropFormula::And(ps) => ps.iter().all(|p| p.eval(assignment)),
            PropFormula::Or(ps) => ps.iter().any(|p| p.eval(assignment)),
        }
    }

    /// One more than the largest atom id, or 0.
    pub fn atom_bound(&self) -> usize {
        match self {
            PropFormula::Const(_) => 0,
            PropFormula::Atom(i) => i + 1,
            PropFormula::Not(p) => p.atom_bound(),
            PropFormula::And(ps) | PropFormula::Or(ps) => ps.iter().map(|p| p.atom_bound()).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, ps: &[PropFormula], op: &str| {
            f.write_str("(")?;
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")
        };
        match self {
            PropFormula::Const(true) => f.write_str("T"),
            PropFormula::Const(false) => f.write_str("F"),
            PropFormula::Atom(i) => write!(f, "x{i}"),
            PropFormula::Not(p) => write!(f, "!{p}"),
            PropFormula::And(ps) => list(f, ps, "&"),
            PropFormula::Or(ps) => list(f, ps, "|"),
        }
    }
}

/// Truth values of atoms `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn get(&self, id: usize) -> bool {
        self.0.get(id).copied().unwrap_or(false)
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}
