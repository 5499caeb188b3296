//! Star-free expressions with exponentiation, their encoding as list
//! terms, and a reference enumerator for their languages.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::benchlab::explist::{explist_term, expn_with_ceiling, multiply, power_with_chain, Flavor, Namer};
use crate::error::{Error, Result};
use crate::language::{Formula, Mode, Term};
use crate::value::{is_ident_char, is_ident_start};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Lit(u64),
    /// `expn(k, n)`.
    Exp {
        k: u32,
        n: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegExpr {
    Sym(String),
    Union(Box<RegExpr>, Box<RegExpr>),
    Concat(Box<RegExpr>, Box<RegExpr>),
    Power(Box<RegExpr>, Exponent),
}

impl RegExpr {
    pub fn sym(a: &str) -> RegExpr {
        RegExpr::Sym(a.to_string())
    }

    pub fn union(a: RegExpr, b: RegExpr) -> RegExpr {
        RegExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn concat(a: RegExpr, b: RegExpr) -> RegExpr {
        RegExpr::Concat(Box::new(a), Box::new(b))
    }

    pub fn power(a: RegExpr, m: u64) -> RegExpr {
        RegExpr::Power(Box::new(a), Exponent::Lit(m))
    }

    pub fn power_exp(a: RegExpr, k: u32, n: u64) -> RegExpr {
        RegExpr::Power(Box::new(a), Exponent::Exp { k, n })
    }

    /// Number of union, concatenation and power nodes.
    pub fn operators(&self) -> usize {
        match self {
            RegExpr::Sym(_) => 0,
            RegExpr::Union(a, b) | RegExpr::Concat(a, b) => 1 + a.operators() + b.operators(),
            RegExpr::Power(a, _) => 1 + a.operators(),
        }
    }

    pub fn alphabet(&self, out: &mut BTreeSet<String>) {
        match self {
            RegExpr::Sym(a) => {
                out.insert(a.clone());
            }
            RegExpr::Union(a, b) | RegExpr::Concat(a, b) => {
                a.alphabet(out);
                b.alphabet(out);
            }
            RegExpr::Power(a, _) => a.alphabet(out),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            RegExpr::Sym(_) => Ok(()),
            RegExpr::Union(a, b) | RegExpr::Concat(a, b) => {
                a.validate()?;
                b.validate()
            }
            RegExpr::Power(_, Exponent::Lit(0)) => Err(Error::Precondition("exponents must be at least 1".into())),
            RegExpr::Power(_, Exponent::Exp { k: 0, .. }) => Err(Error::Precondition("exp(k, n) needs k >= 1".into())),
            RegExpr::Power(a, _) => a.validate(),
        }
    }
}

impl fmt::Display for RegExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegExpr::Sym(a) => f.write_str(a),
            RegExpr::Union(a, b) => write!(f, "({a}|{b})"),
            RegExpr::Concat(a, b) => write!(f, "({a}.{b})"),
            RegExpr::Power(a, Exponent::Lit(m)) => write!(f, "({a}^{m})"),
            RegExpr::Power(a, Exponent::Exp { k, n }) => write!(f, "({a}^^{k},{n})"),
        }
    }
}

struct ExprParser<'s> {
    src: &'s str,
    pos: usize,
}

impl ExprParser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(1, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits: String = self.src[self.pos..].chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        let v = digits.parse().map_err(|_| self.err("number too large"))?;
        self.pos += digits.len();
        Ok(v)
    }

    fn expr(&mut self) -> Result<RegExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let a = self.expr()?;
                let e = if self.eat("|") {
                    RegExpr::union(a, self.expr()?)
                } else if self.eat(".") {
                    RegExpr::concat(a, self.expr()?)
                } else if self.eat("^^") {
                    let k = self.number()?;
                    self.expect(",")?;
                    let n = self.number()?;
                    let k = u32::try_from(k).map_err(|_| self.err("k too large"))?;
                    RegExpr::power_exp(a, k, n)
                } else if self.eat("^") {
                    RegExpr::power(a, self.number()?)
                } else {
                    return Err(self.err("expected `|`, `.`, `^` or `^^`"));
                };
                self.expect(")")?;
                Ok(e)
            }
            Some(c) if is_ident_start(c) => {
                let name: String = self.src[self.pos..].chars().take_while(|&c| is_ident_char(c)).collect();
                self.pos += name.len();
                Ok(RegExpr::Sym(name))
            }
            Some(_) => Err(self.err("expected a symbol or `(`")),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

impl FromStr for RegExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = ExprParser { src: s, pos: 0 };
        let e = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        e.validate()?;
        Ok(e)
    }
}

/// A ground term listing the words of `e`, each word a list of urelements.
/// Its size is linear in the size of `e`.
pub fn regex_list_term(e: &RegExpr) -> Result<Term> {
    e.validate()?;
    list_term(&mut Namer::default(), e)
}

fn list_term(namer: &mut Namer, e: &RegExpr) -> Result<Term> {
    Ok(match e {
        RegExpr::Sym(a) => Term::List(vec![Term::List(vec![Term::ur(a)])]),
        RegExpr::Union(a, b) => Term::conc(list_term(namer, a)?, list_term(namer, b)?),
        RegExpr::Concat(a, b) => {
            let l1 = list_term(namer, a)?;
            let l2 = list_term(namer, b)?;
            multiply(namer, l1, l2)
        }
        RegExpr::Power(a, exp) => {
            let chain = match *exp {
                Exponent::Lit(m) => Term::List(vec![Term::Nil; m as usize]),
                Exponent::Exp { k, n } => explist_term(k, n, Flavor::Rec)?,
            };
            let l = list_term(namer, a)?;
            power_with_chain(namer, l, chain)
        }
    })
}

/// A closed, predicate-free formula that holds exactly when the two
/// languages differ.
pub fn regex_ineq_formula(e1: &RegExpr, e2: &RegExpr) -> Result<Formula> {
    let l1 = regex_list_term(e1)?;
    let l2 = regex_list_term(e2)?;
    let missing = |from: &Term, other: &Term| {
        Formula::exists(
            "x",
            Mode::In,
            from.clone(),
            Formula::not(Formula::Mem(Term::var("x"), other.clone())),
        )
    };
    Ok(Formula::or(missing(&l1, &l2), missing(&l2, &l1)))
}

/// A word, as its sequence of symbols.
pub type Word = Vec<String>;

#[derive(Debug, Clone, Copy)]
pub struct LangGuard {
    pub max_words: usize,
    pub max_word_len: usize,
}

impl Default for LangGuard {
    fn default() -> Self {
        LangGuard {
            max_words: 1 << 20,
            max_word_len: 1 << 12,
        }
    }
}

pub fn oracle_lang(e: &RegExpr) -> Result<BTreeSet<Word>> {
    oracle_lang_with(e, LangGuard::default())
}

pub fn oracle_lang_with(e: &RegExpr, guard: LangGuard) -> Result<BTreeSet<Word>> {
    e.validate()?;
    lang(e, &guard)
}

fn product(a: &BTreeSet<Word>, b: &BTreeSet<Word>, guard: &LangGuard) -> Result<BTreeSet<Word>> {
    if a.len().saturating_mul(b.len()) > guard.max_words.saturating_mul(64) {
        return Err(Error::Guard("language product too large".into()));
    }
    let mut out = BTreeSet::new();
    for u in a {
        for v in b {
            if u.len() + v.len() > guard.max_word_len {
                return Err(Error::Guard(format!("word longer than {}", guard.max_word_len)));
            }
            out.insert(u.iter().chain(v).cloned().collect());
        }
    }
    if out.len() > guard.max_words {
        return Err(Error::Guard(format!("language larger than {} words", guard.max_words)));
    }
    Ok(out)
}

fn lang(e: &RegExpr, guard: &LangGuard) -> Result<BTreeSet<Word>> {
    match e {
        RegExpr::Sym(a) => Ok(BTreeSet::from([vec![a.clone()]])),
        RegExpr::Union(a, b) => {
            let mut l = lang(a, guard)?;
            l.extend(lang(b, guard)?);
            Ok(l)
        }
        RegExpr::Concat(a, b) => product(&lang(a, guard)?, &lang(b, guard)?, guard),
        RegExpr::Power(a, exp) => {
            let m = match *exp {
                Exponent::Lit(m) => m,
                Exponent::Exp { k, n } => expn_with_ceiling(k, n, guard.max_word_len as u64)?,
            };
            let base = lang(a, guard)?;
            let mut acc = base.clone();
            for _ in 1..m {
                acc = product(&acc, &base, guard)?;
            }
            Ok(acc)
        }
    }
}

pub fn word_to_string(w: &Word) -> String {
    if w.iter().all(|s| s.chars().count() == 1) {
        w.concat()
    } else {
        w.join(" ")
    }
}
