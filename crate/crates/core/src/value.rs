//! Hereditarily finite list values.
//!
//! A [`Value`] is either an urelement or a finite (possibly nested) list of
//! values. Lists grow and shrink at their *end*: `head` is the last element,
//! `tail` drops the last element and `cons` appends a new last element.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Ur(Arc<str>),
    List(Arc<[Value]>),
}

impl Value {
    pub fn nil() -> Value {
        Value::List(Arc::from(Vec::new()))
    }

    pub fn ur(name: &str) -> Value {
        Value::Ur(Arc::from(name))
    }

    pub fn list(elems: Vec<Value>) -> Value {
        Value::List(Arc::from(elems))
    }

    /// A list of `n` copies of nil.
    pub fn nils(n: usize) -> Value {
        Value::list(vec![Value::nil(); n])
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Value::List(l) if l.is_empty())
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(l) => Some(l),
            Value::Ur(_) => None,
        }
    }

    pub(crate) fn expect_list(&self, op: &'static str) -> Result<&[Value]> {
        match self {
            Value::List(l) => Ok(l),
            Value::Ur(name) => Err(Error::Sort {
                op,
                found: name.to_string(),
            }),
        }
    }

    /// Urelement names occurring anywhere inside the value.
    pub fn urelements(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            Value::Ur(n) => {
                out.insert(n.to_string());
            }
            Value::List(l) => l.iter().for_each(|v| v.urelements(out)),
        }
    }

    /// Number of nodes in the value tree.
    pub fn weight(&self) -> usize {
        match self {
            Value::Ur(_) => 1,
            Value::List(l) => 1 + l.iter().map(Value::weight).sum::<usize>(),
        }
    }
}

/// Last element of `l`, or nil when `l` is nil.
pub fn head(l: &Value) -> Result<Value> {
    let elems = l.expect_list("head")?;
    Ok(elems.last().cloned().unwrap_or_else(Value::nil))
}

/// `l` without its last element, or nil when `l` is nil.
pub fn tail(l: &Value) -> Result<Value> {
    let elems = l.expect_list("tail")?;
    match elems.len() {
        0 => Ok(l.clone()),
        n => Ok(Value::List(Arc::from(&elems[..n - 1]))),
    }
}

/// Appends `x` as the new last element of `l`.
pub fn cons(l: &Value, x: &Value) -> Result<Value> {
    let elems = l.expect_list("cons")?;
    let mut out = Vec::with_capacity(elems.len() + 1);
    out.extend_from_slice(elems);
    out.push(x.clone());
    Ok(Value::list(out))
}

pub fn conc(l1: &Value, l2: &Value) -> Result<Value> {
    let a = l1.expect_list("conc")?;
    let b = l2.expect_list("conc")?;
    if a.is_empty() {
        return Ok(l2.clone());
    }
    if b.is_empty() {
        return Ok(l1.clone());
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    Ok(Value::list(out))
}

/// Top-level membership.
pub fn mem(x: &Value, l: &Value) -> Result<bool> {
    Ok(l.expect_list("in")?.contains(x))
}

/// Initial-segment relation. Segments are the non-empty prefixes of `l`,
/// including `l` itself; nil is never a segment.
pub fn initseg(x: &Value, l: &Value) -> Result<bool> {
    let elems = l.expect_list("sub")?;
    match x {
        Value::List(xs) => Ok(!xs.is_empty() && xs.len() <= elems.len() && **xs == elems[..xs.len()]),
        Value::Ur(_) => Ok(false),
    }
}

pub fn len(l: &Value) -> Result<usize> {
    Ok(l.expect_list("len")?.len())
}

/// The initial segments of `l` in increasing length.
pub fn segments(l: &Value) -> Result<impl ExactSizeIterator<Item = Value> + '_> {
    let elems = l.expect_list("sub")?;
    Ok((1..elems.len() + 1).map(move |k| Value::List(Arc::from(&elems[..k]))))
}

/// The segment of `l` that keeps `len(l) - z + 1` elements, for `1 <= z <= len(l)`.
pub fn seg_from_end(l: &Value, z: usize) -> Result<Value> {
    let elems = l.expect_list("seg")?;
    if z == 0 || z > elems.len() {
        return Err(Error::Precondition(format!(
            "segment index {z} outside 1..={}",
            elems.len()
        )));
    }
    Ok(Value::List(Arc::from(&elems[..elems.len() - z + 1])))
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Ur(n) => write!(f, "'{n}"),
            Value::List(l) if l.is_empty() => f.write_str("nil"),
            Value::List(l) => {
                f.write_str("[")?;
                for (i, v) in l.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl FromStr for Value {
    type Err = Error;

    /// Parses the literal syntax `nil`, `'ident`, `[v, ...]`.
    fn from_str(s: &str) -> Result<Value> {
        let mut p = LiteralParser {
            chars: s.char_indices().collect(),
            pos: 0,
            src: s,
        };
        let v = p.value()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input after value"));
        }
        Ok(v)
    }
}

struct LiteralParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl LiteralParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn error(&self, msg: &str) -> Error {
        let offset = self.chars.get(self.pos).map_or(self.src.len(), |&(o, _)| o);
        let before = &self.src[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::syntax(line, column, msg)
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        match self.peek() {
            Some(c) if is_ident_start(c) => self.pos += 1,
            _ => return Err(self.error("expected identifier")),
        }
        while matches!(self.peek(), Some(c) if is_ident_char(c)) {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn value(&mut self) -> Result<Value> {
        self.skip_ws();
        match self.peek() {
            Some('\'') => {
                self.pos += 1;
                Ok(Value::ur(&self.ident()?))
            }
            Some('[') => {
                self.pos += 1;
                let mut elems = Vec::new();
                self.skip_ws();
                if self.peek() == Some(']') {
                    self.pos += 1;
                    return Ok(Value::nil());
                }
                loop {
                    elems.push(self.value()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(']') => {
                            self.pos += 1;
                            return Ok(Value::list(elems));
                        }
                        _ => return Err(self.error("expected ',' or ']'")),
                    }
                }
            }
            _ => {
                let id = self.ident()?;
                if id == "nil" {
                    Ok(Value::nil())
                } else {
                    Err(self.error("expected nil, 'ident or ["))
                }
            }
        }
    }
}
