//! Canonical text form. Parsing the printed form yields the same AST.

use std::fmt::{self, Display, Formatter, Write};

use crate::language::ast::{Formula, Mode, Numeral, Quantifier, Term};

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Nil => f.write_str("nil"),
            Term::Ur(n) => write!(f, "'{n}"),
            Term::Var(x) => write!(f, "${x}"),
            Term::List(ts) => {
                f.write_char('[')?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_char(']')
            }
            Term::Head(t) => write!(f, "head({t})"),
            Term::Tail(t) => write!(f, "tail({t})"),
            Term::Cons(a, b) => write!(f, "cons({a}, {b})"),
            Term::Conc(a, b) => write!(f, "conc({a}, {b})"),
            Term::BSearch { mode, var, body, bound } => {
                let kw = match mode {
                    Mode::In => "bsearch_in",
                    Mode::Seg => "bsearch_sub",
                };
                write!(f, "{kw}(${var}. {body}, {bound})")
            }
            Term::Iter {
                count,
                numeral,
                base,
                var,
                step,
            } => {
                let r = match numeral {
                    Numeral::Unary => 'u',
                    Numeral::Binary => 'b',
                };
                write!(f, "iter<{count},{r}>({base}; ${var}. {step})")
            }
            Term::Rec {
                base,
                acc,
                elem,
                step,
                bound,
            } => write!(f, "rec({base}; ${acc}, ${elem}. {step}; {bound})"),
        }
    }
}

// Binding strength: quantifiers extend right and bind loosest.
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Quant { .. } => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    }
}

fn write_at(out: &mut Formatter<'_>, f: &Formula, min_level: u8) -> fmt::Result {
    if level(f) < min_level {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl Display for Formula {
    fn fmt(&self, out: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => out.write_str("true"),
            Formula::False => out.write_str("false"),
            Formula::Eq(a, b) => write!(out, "{a} = {b}"),
            Formula::Mem(a, b) => write!(out, "{a} in {b}"),
            Formula::Seg(a, b) => write!(out, "{a} sub {b}"),
            Formula::Pred(name, args) => {
                write!(out, "{name}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    write!(out, "{t}")?;
                }
                out.write_char(')')
            }
            Formula::Not(g) => {
                out.write_char('!')?;
                write_at(out, g, 3)
            }
            Formula::And(a, b) => {
                write_at(out, a, 2)?;
                out.write_str(" & ")?;
                write_at(out, b, 3)
            }
            Formula::Or(a, b) => {
                write_at(out, a, 1)?;
                out.write_str(" | ")?;
                write_at(out, b, 2)
            }
            Formula::Quant {
                kind,
                var,
                mode,
                bound,
                body,
            } => {
                let q = match kind {
                    Quantifier::Forall => "forall",
                    Quantifier::Exists => "exists",
                };
                let m = match mode {
                    Mode::In => "in",
                    Mode::Seg => "sub",
                };
                write!(out, "{q} ${var} {m} {bound} . {body}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::language::{parse_formula, parse_term};

    #[test]
    fn canonical_forms() {
        let t = parse_term("rec(nil;$g,$b.cons($g,$b);['a])").unwrap();
        assert_eq!(t.to_string(), "rec(nil; $g, $b. cons($g, $b); ['a])");
        let f = parse_formula("(forall $x in ['a] . P($x)) & !(Q('a) | R('a))").unwrap();
        assert_eq!(f.to_string(), "(forall $x in ['a] . P($x)) & !(Q('a) | R('a))");
        let g = parse_formula("P('a) & (Q('a) & R('a))").unwrap();
        assert_eq!(g.to_string(), "P('a) & (Q('a) & R('a))");
        let h = parse_formula("P('a) -> Q('a)").unwrap();
        assert_eq!(h.to_string(), "!P('a) | Q('a)");
    }
}
