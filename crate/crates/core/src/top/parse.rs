use super::{Formula, Literal};
use crate::syntax::{Cursor, ParseError, Tok};

/// Parses TOP concrete syntax. Conjunction is right-associative.
pub fn parse_top(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { cur: Cursor::new(text)? };
    let f = p.formula()?;
    p.cur.expect_eof()?;
    Ok(f)
}

struct Parser {
    cur: Cursor,
}

impl Parser {
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let first = self.unit()?;
        if self.cur.eat(&Tok::Amp) {
            let rest = self.formula()?;
            Ok(Formula::And(Box::new(first), Box::new(rest)))
        } else {
            Ok(first)
        }
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        match self.cur.peek().clone() {
            Tok::LParen => {
                self.cur.next();
                let f = self.formula()?;
                self.cur.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if *self.cur.peek_at(1) == Tok::LBracket => self.operator(&name),
            Tok::Ident(_) => self.literal().map(Formula::Literal),
            other => self.cur.error(format!("expected a formula, found {other}")),
        }
    }

    fn operator(&mut self, name: &str) -> Result<Formula, ParseError> {
        if !matches!(
            name,
            "Part" | "Pres" | "Past" | "Perf" | "Culm" | "At" | "Before" | "After" | "Fills" | "Ntense" | "For"
        ) {
            return self.cur.error(format!("unknown operator `{name}`"));
        }
        self.cur.next();
        self.cur.expect(Tok::LBracket)?;
        let f = match name {
            "Part" => {
                let part = self.cur.name("partitioning")?;
                self.cur.expect(Tok::Comma)?;
                let var = self.cur.var()?;
                Formula::Part { part, var }
            }
            "Pres" => Formula::Pres(Box::new(self.formula()?)),
            "Fills" => Formula::Fills(Box::new(self.formula()?)),
            "Past" | "Perf" => {
                let var = self.cur.var()?;
                self.cur.expect(Tok::Comma)?;
                let body = Box::new(self.formula()?);
                if name == "Past" {
                    Formula::Past { var, body }
                } else {
                    Formula::Perf { var, body }
                }
            }
            "Culm" => {
                if !matches!(self.cur.peek(), Tok::Ident(_)) || *self.cur.peek_at(1) != Tok::LParen {
                    return self.cur.error("Culm takes a single literal");
                }
                Formula::Culm(self.literal()?)
            }
            "At" | "Before" | "After" => {
                let anchor = self.cur.term()?;
                self.cur.expect(Tok::Comma)?;
                let body = Box::new(self.formula()?);
                match name {
                    "At" => Formula::At { anchor, body },
                    "Before" => Formula::Before { anchor, body },
                    _ => Formula::After { anchor, body },
                }
            }
            "Ntense" => {
                let anchor = match self.cur.peek().clone() {
                    Tok::Ident(s) if s == "now" => {
                        self.cur.next();
                        None
                    }
                    _ => Some(self.cur.var()?),
                };
                self.cur.expect(Tok::Comma)?;
                let body = Box::new(self.formula()?);
                match anchor {
                    None => Formula::NtenseNow(body),
                    Some(var) => Formula::NtenseVar { var, body },
                }
            }
            _ => {
                let part = self.cur.name("partitioning")?;
                self.cur.expect(Tok::Comma)?;
                let qty = match self.cur.next() {
                    Tok::Int(n) if n >= 1 && n <= u32::MAX as u64 => n as u32,
                    Tok::Int(_) => return self.cur.error("For quantity must be a positive integer"),
                    other => return self.cur.error(format!("expected a quantity, found {other}")),
                };
                self.cur.expect(Tok::Comma)?;
                Formula::For { part, qty, body: Box::new(self.formula()?) }
            }
        };
        self.cur.expect(Tok::RBracket)?;
        Ok(f)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let functor = self.cur.name("predicate functor")?;
        self.cur.expect(Tok::LParen)?;
        let mut args = vec![self.cur.term()?];
        while self.cur.eat(&Tok::Comma) {
            args.push(self.cur.term()?);
        }
        self.cur.expect(Tok::RParen)?;
        self.cur.record_arity(&functor, args.len())?;
        Ok(Literal { functor, args })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;

    #[test]
    fn parses_at_past() {
        let f = parse_top("At[d_jan, Past[?e, empty(tank5)]]").unwrap();
        assert_eq!(
            f,
            Formula::at(
                Term::constant("d_jan"),
                Formula::past("e", Formula::lit("empty", vec![Term::constant("tank5")]))
            )
        );
    }

    #[test]
    fn parses_nested_perf_culm() {
        let f = parse_top("Past[?e1, Perf[?e2, Culm[inspecting(jadams, ba737)]]]").unwrap();
        let expected = Formula::past(
            "e1",
            Formula::perf(
                "e2",
                Formula::Culm(Literal::new(
                    "inspecting",
                    vec![Term::constant("jadams"), Term::constant("ba737")],
                )),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn culm_requires_a_literal() {
        assert!(matches!(parse_top("Culm[At[d_jan, empty(tank5)]]"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_top("Culm[Pres[x(y)]]"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn every_operator_parses() {
        let text = "Part[fivepm, ?f] & After[?f, Past[?e, empty(tank5)]] & Before[d, Fills[x(y)]] \
                    & Ntense[now, p(?q)] & Ntense[?e, p(?q)] & For[minute, 45, Pres[c(b)]]";
        let f = parse_top(text).unwrap();
        assert_eq!(f.conjuncts().len(), 6);
        assert_eq!(parse_top(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn conjunction_is_right_nested() {
        let f = parse_top("a(x) & b(x) & c(x)").unwrap();
        assert!(matches!(&f, Formula::And(l, r) if matches!(**l, Formula::Literal(_)) && matches!(**r, Formula::And(..))));
        let g = parse_top("(a(x) & b(x)) & c(x)").unwrap();
        assert_ne!(f, g);
    }

    #[test]
    fn reports_positions_and_arity_clashes() {
        assert_eq!(
            parse_top("Past[?e,\n  empty(tank5]"),
            Err(ParseError::Syntax { line: 2, column: 14, message: "expected `)`, found `]`".into() })
        );
        assert_eq!(
            parse_top("empty(tank5) & empty(tank5, tank6)"),
            Err(ParseError::Arity { functor: "empty".into(), first: 1, second: 2 })
        );
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "",
            "empty()",
            "For[minute, 0, a(b)]",
            "Ntense[tank, a(b)]",
            "Past[e, a(b)]",
            "Foo[a(b)]",
            "a(b) &",
            "a(b) b(c)",
            "eq(a, b)",
            "a(now)",
            "tank5",
        ] {
            assert!(parse_top(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let f = parse_top("# a question\n  Pres[ empty( tank5 ) ]  # trailing").unwrap();
        assert_eq!(f.to_string(), "Pres[empty(tank5)]");
    }
}
