//! Finite presentations of list superstructures.
//!
//! The superstructure itself is infinite; what a decision procedure
//! consults is the urelement alphabet and, per predicate, a finite
//! extension table. Atoms not listed in a table are false.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::Formula;
use crate::value::Value;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    predicates: BTreeMap<String, usize>,
    urelements: BTreeSet<String>,
}

impl Signature {
    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<()> {
        if arity == 0 {
            return Err(Error::Structure(format!("predicate {name} must have arity >= 1")));
        }
        match self.predicates.get(name) {
            Some(&a) if a != arity => Err(Error::Arity {
                name: name.to_string(),
                expected: a,
                found: arity,
            }),
            _ => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn declare_urelement(&mut self, name: &str) {
        self.urelements.insert(name.to_string());
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn urelements(&self) -> &BTreeSet<String> {
        &self.urelements
    }

    /// The signature a formula uses: each predicate at the arity it is
    /// applied with. Fails if one predicate is used at two arities.
    pub fn infer(f: &Formula) -> Result<Signature> {
        let mut sig = Signature::default();
        let mut err = None;
        f.visit_preds(&mut |name, args| {
            if err.is_none() {
                if let Err(e) = sig.declare_predicate(name, args.len()) {
                    err = Some(e);
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        f.visit_terms(&mut |t| t.urelements(&mut sig.urelements));
        Ok(sig)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extension {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Value>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Structure {
    urelements: BTreeSet<String>,
    predicates: BTreeMap<String, Extension>,
}

impl Structure {
    /// No urelements and no predicates.
    pub fn empty() -> Structure {
        Structure::default()
    }

    pub fn new(urelements: impl IntoIterator<Item = String>) -> Structure {
        Structure {
            urelements: urelements.into_iter().collect(),
            predicates: BTreeMap::new(),
        }
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<()> {
        if arity == 0 {
            return Err(Error::Structure(format!("predicate {name} must have arity >= 1")));
        }
        let ext = self.predicates.entry(name.to_string()).or_insert(Extension {
            arity,
            tuples: BTreeSet::new(),
        });
        if ext.arity != arity {
            return Err(Error::Arity {
                name: name.to_string(),
                expected: ext.arity,
                found: arity,
            });
        }
        Ok(())
    }

    /// Adds a tuple to a declared predicate's extension.
    pub fn insert(&mut self, name: &str, tuple: Vec<Value>) -> Result<()> {
        let mut urs = BTreeSet::new();
        tuple.iter().for_each(|v| v.urelements(&mut urs));
        if let Some(u) = urs.iter().find(|u| !self.urelements.contains(*u)) {
            return Err(Error::Structure(format!(
                "tuple of {name} mentions undeclared urelement '{u}"
            )));
        }
        let ext = self
            .predicates
            .get_mut(name)
            .ok_or_else(|| Error::UnknownPredicate(name.to_string()))?;
        if ext.arity != tuple.len() {
            return Err(Error::Arity {
                name: name.to_string(),
                expected: ext.arity,
                found: tuple.len(),
            });
        }
        ext.tuples.insert(tuple);
        Ok(())
    }

    pub fn add_urelement(&mut self, name: &str) {
        self.urelements.insert(name.to_string());
    }

    pub fn urelements(&self) -> &BTreeSet<String> {
        &self.urelements
    }

    pub fn extension(&self, name: &str) -> Option<&Extension> {
        self.predicates.get(name)
    }

    pub fn signature(&self) -> Signature {
        Signature {
            predicates: self.predicates.iter().map(|(k, e)| (k.clone(), e.arity)).collect(),
            urelements: self.urelements.clone(),
        }
    }

    /// Closed-world truth of `name(args)`.
    pub fn atom_holds(&self, name: &str, args: &[Value]) -> Result<bool> {
        let ext = self
            .predicates
            .get(name)
            .ok_or_else(|| Error::UnknownPredicate(name.to_string()))?;
        if ext.arity != args.len() {
            return Err(Error::Arity {
                name: name.to_string(),
                expected: ext.arity,
                found: args.len(),
            });
        }
        Ok(ext.tuples.contains(args))
    }

    pub fn from_json(text: &str) -> Result<Structure> {
        let raw: RawStructure = serde_json::from_str(text).map_err(|e| Error::Structure(e.to_string()))?;
        let mut s = Structure::new(raw.urelements);
        for (name, pred) in raw.predicates {
            s.declare_predicate(&name, pred.arity)?;
            for tuple in pred.tuples {
                let values = tuple
                    .iter()
                    .map(|lit| lit.parse::<Value>())
                    .collect::<Result<Vec<_>>>()?;
                s.insert(&name, values)?;
            }
        }
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        let raw = RawStructure {
            urelements: self.urelements.iter().cloned().collect(),
            predicates: self
                .predicates
                .iter()
                .map(|(name, ext)| {
                    let tuples = ext
                        .tuples
                        .iter()
                        .map(|t| t.iter().map(Value::to_string).collect())
                        .collect();
                    (
                        name.clone(),
                        RawPredicate {
                            arity: ext.arity,
                            tuples,
                        },
                    )
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("structure serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStructure {
    #[serde(default)]
    urelements: Vec<String>,
    #[serde(default)]
    predicates: BTreeMap<String, RawPredicate>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPredicate {
    arity: usize,
    #[serde(default)]
    tuples: Vec<Vec<String>>,
}
