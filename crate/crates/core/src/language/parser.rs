//! Recursive-descent parser for terms and formulas.
//!
//! Precedence, loosest first: `->` (right associative), `|`, `&`, `!`.
//! A quantifier body extends as far right as possible.

use crate::error::{Error, Result};
use crate::language::ast::{Formula, Mode, Numeral, Quantifier, Term};
use crate::value::{is_ident_char, is_ident_start};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Ur(String),
    Nat(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    Eq,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Lt,
    Gt,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Var(s) => format!("'${s}'"),
            Tok::Ur(s) => format!("'''{s}'"),
            Tok::Nat(n) => format!("'{n}'"),
            Tok::Eof => "end of input".into(),
            other => format!("{other:?}"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = column;
        let ident_at = |j: usize| -> usize {
            let mut k = j;
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            k
        };
        let (tok, width) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            '.' => (Tok::Dot, 1),
            '=' => (Tok::Eq, 1),
            '!' => (Tok::Bang, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Pipe, 1),
            '<' => (Tok::Lt, 1),
            '>' => (Tok::Gt, 1),
            '-' if chars.get(i + 1) == Some(&'>') => (Tok::Arrow, 2),
            '$' | '\'' => {
                if !chars.get(i + 1).is_some_and(|&c| is_ident_start(c)) {
                    return Err(Error::syntax(line, column, format!("expected identifier after '{c}'")));
                }
                let end = ident_at(i + 1);
                let name: String = chars[i + 1..end].iter().collect();
                let tok = if c == '$' { Tok::Var(name) } else { Tok::Ur(name) };
                (tok, end - i)
            }
            c if c.is_ascii_digit() => {
                let mut end = i;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let digits: String = chars[i..end].iter().collect();
                let n = digits
                    .parse::<u64>()
                    .map_err(|_| Error::syntax(line, column, "numeral too large"))?;
                (Tok::Nat(n), end - i)
            }
            c if is_ident_start(c) => {
                let end = ident_at(i);
                (Tok::Ident(chars[i..end].iter().collect()), end - i)
            }
            other => return Err(Error::syntax(line, column, format!("unexpected character '{other}'"))),
        };
        out.push(Spanned {
            tok,
            line,
            column: start_col,
        });
        i += width;
        column += width;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

const RESERVED: &[&str] = &[
    "nil",
    "head",
    "tail",
    "cons",
    "conc",
    "bsearch_in",
    "bsearch_sub",
    "iter",
    "rec",
    "forall",
    "exists",
    "in",
    "sub",
    "true",
    "false",
];

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos.min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek().clone();
        self.pos += 1;
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let s = &self.toks[self.pos.min(self.toks.len() - 1)];
        Error::syntax(s.line, s.column, msg)
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn var(&mut self) -> Result<String> {
        match self.bump() {
            Tok::Var(v) => Ok(v),
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected variable, found {}", other.describe())))
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {} after end of input", self.peek().describe())))
        }
    }

    // formula := implication
    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                let kind = if kw == "forall" {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                self.bump();
                let var = self.var()?;
                let mode = self.mode()?;
                let bound = self.term()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(Formula::Quant {
                    kind,
                    var,
                    mode,
                    bound,
                    body: Box::new(body),
                })
            }
            Tok::Ident(kw) if kw == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(kw) if kw == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) if !RESERVED.contains(&name.as_str()) => {
                let name = name.clone();
                self.bump();
                self.expect(Tok::LParen)?;
                let args = self.term_list(Tok::RParen)?;
                if args.is_empty() {
                    return Err(self.error(format!("predicate {name} needs at least one argument")));
                }
                Ok(Formula::Pred(name, args))
            }
            _ => {
                let lhs = self.term()?;
                match self.peek() {
                    Tok::Eq => {
                        self.bump();
                        Ok(Formula::Eq(lhs, self.term()?))
                    }
                    Tok::Ident(kw) if kw == "in" => {
                        self.bump();
                        Ok(Formula::Mem(lhs, self.term()?))
                    }
                    Tok::Ident(kw) if kw == "sub" => {
                        self.bump();
                        Ok(Formula::Seg(lhs, self.term()?))
                    }
                    other => Err(self.error(format!("expected '=', 'in' or 'sub', found {}", other.describe()))),
                }
            }
        }
    }

    fn mode(&mut self) -> Result<Mode> {
        if self.is_keyword("in") {
            self.bump();
            Ok(Mode::In)
        } else if self.is_keyword("sub") {
            self.bump();
            Ok(Mode::Seg)
        } else {
            Err(self.error(format!("expected 'in' or 'sub', found {}", self.peek().describe())))
        }
    }

    /// Comma-separated terms up to `close` (consumed). Allows an empty list.
    fn term_list(&mut self, close: Tok) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        if *self.peek() == close {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                t if *t == close => {
                    self.bump();
                    return Ok(out);
                }
                other => {
                    return Err(self.error(format!(
                        "expected ',' or {}, found {}",
                        close.describe(),
                        other.describe()
                    )))
                }
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.bump() {
            Tok::Var(v) => Ok(Term::Var(v)),
            Tok::Ur(u) => Ok(Term::Ur(u)),
            Tok::LBracket => Ok(Term::List(self.term_list(Tok::RBracket)?)),
            Tok::Ident(kw) => self.keyword_term(&kw),
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected term, found {}", other.describe())))
            }
        }
    }

    fn keyword_term(&mut self, kw: &str) -> Result<Term> {
        match kw {
            "nil" => Ok(Term::Nil),
            "head" | "tail" => {
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(if kw == "head" { Term::head(t) } else { Term::tail(t) })
            }
            "cons" | "conc" => {
                self.expect(Tok::LParen)?;
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(if kw == "cons" {
                    Term::cons(a, b)
                } else {
                    Term::conc(a, b)
                })
            }
            "bsearch_in" | "bsearch_sub" => {
                let mode = if kw == "bsearch_in" { Mode::In } else { Mode::Seg };
                self.expect(Tok::LParen)?;
                let var = self.var()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                self.expect(Tok::Comma)?;
                let bound = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::BSearch {
                    mode,
                    var,
                    body: Box::new(body),
                    bound: Box::new(bound),
                })
            }
            "iter" => {
                self.expect(Tok::Lt)?;
                let count = match self.bump() {
                    Tok::Nat(n) => n,
                    other => {
                        self.pos -= 1;
                        return Err(self.error(format!("expected iteration count, found {}", other.describe())));
                    }
                };
                self.expect(Tok::Comma)?;
                let numeral = match self.bump() {
                    Tok::Ident(s) if s == "u" => Numeral::Unary,
                    Tok::Ident(s) if s == "b" => Numeral::Binary,
                    other => {
                        self.pos -= 1;
                        return Err(self.error(format!("expected 'u' or 'b', found {}", other.describe())));
                    }
                };
                self.expect(Tok::Gt)?;
                self.expect(Tok::LParen)?;
                let base = self.term()?;
                self.expect(Tok::Semi)?;
                let var = self.var()?;
                self.expect(Tok::Dot)?;
                let step = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::Iter {
                    count,
                    numeral,
                    base: Box::new(base),
                    var,
                    step: Box::new(step),
                })
            }
            "rec" => {
                self.expect(Tok::LParen)?;
                let base = self.term()?;
                self.expect(Tok::Semi)?;
                let acc = self.var()?;
                if *self.peek() != Tok::Comma {
                    return Err(self.error("rec binds exactly two variables: $acc, $elem"));
                }
                self.bump();
                let elem = self.var()?;
                if *self.peek() != Tok::Dot {
                    return Err(self.error("rec binds exactly two variables: $acc, $elem"));
                }
                self.bump();
                let step = self.term()?;
                self.expect(Tok::Semi)?;
                let bound = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::Rec {
                    base: Box::new(base),
                    acc,
                    elem,
                    step: Box::new(step),
                    bound: Box::new(bound),
                })
            }
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected term, found '{other}'")))
            }
        }
    }
}

pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser::new(src)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Either a formula or a term, whichever the text parses as.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Term(Term),
    Formula(Formula),
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    match parse_formula(src) {
        Ok(f) => Ok(Expr::Formula(f)),
        Err(formula_err) => match parse_term(src) {
            Ok(t) => Ok(Expr::Term(t)),
            Err(_) => Err(formula_err),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_examples() {
        assert_eq!(
            parse_term("cons(nil,'a)").unwrap(),
            Term::cons(Term::Nil, Term::ur("a"))
        );
        assert_eq!(
            parse_term("bsearch_in($x. $x = 'b, ['a,'b])").unwrap(),
            Term::bsearch(
                Mode::In,
                "x",
                Formula::Eq(Term::var("x"), Term::ur("b")),
                Term::List(vec![Term::ur("a"), Term::ur("b")])
            )
        );
        assert_eq!(
            parse_term("rec(nil; $g,$b. cons($g,$b); ['a])").unwrap(),
            Term::rec(
                Term::Nil,
                "g",
                "b",
                Term::cons(Term::var("g"), Term::var("b")),
                Term::List(vec![Term::ur("a")])
            )
        );
        assert_eq!(
            parse_term("iter<3,b>(nil; $y. tail($y))").unwrap(),
            Term::iter(3, Numeral::Binary, Term::Nil, "y", Term::tail(Term::var("y")))
        );
    }

    #[test]
    fn precedence() {
        let f = parse_formula("!P('a) & Q('a) | R('a) -> S('a) -> T('a)").unwrap();
        let p = |n: &str| Formula::pred(n, vec![Term::ur("a")]);
        let lhs = Formula::or(Formula::and(Formula::not(p("P")), p("Q")), p("R"));
        let expected = Formula::implies(lhs, Formula::implies(p("S"), p("T")));
        assert_eq!(f, expected);
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = parse_formula("forall $x in ['a] . P($x) | Q($x)").unwrap();
        match f {
            Formula::Quant { body, .. } => assert!(matches!(*body, Formula::Or(..))),
            other => panic!("{other:?}"),
        }
        let g = parse_formula("P('a) & exists $x sub ['a] . $x = $x & true").unwrap();
        match g {
            Formula::And(_, rhs) => assert!(matches!(*rhs, Formula::Quant { .. })),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_formula("forall $x in ['a] .\n  P($x) &").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err}");
        let err = parse_term("rec(nil; $g. $g; ['a])").unwrap_err();
        assert!(err.to_string().contains("two variables"), "{err}");
        assert!(parse_term("cons(nil)").is_err());
        assert!(parse_formula("P()").is_err());
        assert!(parse_term("iter<2,x>(nil; $y. $y)").is_err());
        assert!(parse_formula("'a").is_err());
    }

    #[test]
    fn comments_and_expr() {
        assert!(matches!(parse_expr("# a term\n'a").unwrap(), Expr::Term(_)));
        assert!(matches!(parse_expr("'a = 'a").unwrap(), Expr::Formula(_)));
    }
}
