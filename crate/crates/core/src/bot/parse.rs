use super::{BotTerm, Formula, PeriodExpr, PointExpr};
use crate::syntax::{Cursor, ParseError, Term, Tok};

/// Parses BOT concrete syntax. Conjunction is right-associative.
pub fn parse_bot(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { cur: Cursor::new(text)? };
    let f = p.formula()?;
    p.cur.expect_eof()?;
    Ok(f)
}

struct Parser {
    cur: Cursor,
}

fn is_point_keyword(s: &str) -> bool {
    matches!(s, "beg" | "now" | "end" | "earliest" | "latest" | "succ")
}

impl Parser {
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let first = self.unit()?;
        if self.cur.eat(&Tok::Amp) {
            Ok(Formula::And(Box::new(first), Box::new(self.formula()?)))
        } else {
            Ok(first)
        }
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        let word = match self.cur.peek().clone() {
            Tok::LParen => {
                self.cur.next();
                let f = self.formula()?;
                self.cur.expect(Tok::RParen)?;
                return Ok(f);
            }
            Tok::Ident(w) => w,
            other => return self.cur.error(format!("expected a formula, found {other}")),
        };
        let f = match word.as_str() {
            "subper" => {
                self.open()?;
                let a = self.period()?;
                self.cur.expect(Tok::Comma)?;
                let b = self.period()?;
                Formula::Subper(a, b)
            }
            "eq" => {
                self.open()?;
                let a = self.term()?;
                self.cur.expect(Tok::Comma)?;
                let b = self.term()?;
                Formula::Eq(a, b)
            }
            "period" => {
                self.open()?;
                Formula::Period(self.term()?)
            }
            "part" => {
                self.open()?;
                let part = self.cur.name("partitioning")?;
                self.cur.expect(Tok::Comma)?;
                Formula::Part { part, term: self.term()? }
            }
            "prec" => {
                self.open()?;
                let a = self.point()?;
                self.cur.expect(Tok::Comma)?;
                let b = self.point()?;
                Formula::Prec(a, b)
            }
            _ => {
                let functor = self.cur.name("predicate functor")?;
                self.cur.expect(Tok::LParen)?;
                let mut args = vec![self.term()?];
                while self.cur.eat(&Tok::Comma) {
                    args.push(self.term()?);
                }
                self.cur.record_arity(&functor, args.len())?;
                Formula::Literal { functor, args }
            }
        };
        self.cur.expect(Tok::RParen)?;
        Ok(f)
    }

    fn open(&mut self) -> Result<(), ParseError> {
        self.cur.next();
        self.cur.expect(Tok::LParen)
    }

    fn term(&mut self) -> Result<BotTerm, ParseError> {
        match self.cur.peek().clone() {
            Tok::Var(_) => self.cur.var().map(BotTerm::Var),
            Tok::LBracket | Tok::LParen => self.period().map(BotTerm::from),
            Tok::Ident(w) if w == "intersect" => self.period().map(BotTerm::from),
            Tok::Ident(w) if is_point_keyword(&w) => self.point().map(BotTerm::Point),
            _ => self.cur.name("constant").map(BotTerm::Const),
        }
    }

    fn period(&mut self) -> Result<PeriodExpr, ParseError> {
        match self.cur.peek().clone() {
            Tok::Var(_) => self.cur.var().map(|v| PeriodExpr::Ref(Term::Var(v))),
            Tok::LBracket | Tok::LParen => {
                let lo_closed = self.cur.next() == Tok::LBracket;
                let lo = self.point()?;
                self.cur.expect(Tok::Comma)?;
                let hi = self.point()?;
                let hi_closed = match self.cur.peek() {
                    Tok::RBracket => true,
                    Tok::RParen => false,
                    other => return self.cur.error(format!("expected `]` or `)`, found {other}")),
                };
                self.cur.next();
                Ok(PeriodExpr::interval(lo, hi, lo_closed, hi_closed))
            }
            Tok::Ident(w) if w == "intersect" => {
                self.open()?;
                let a = self.period()?;
                self.cur.expect(Tok::Comma)?;
                let b = self.period()?;
                self.cur.expect(Tok::RParen)?;
                Ok(PeriodExpr::intersect(a, b))
            }
            Tok::Ident(w) if is_point_keyword(&w) => {
                self.cur.error(format!("`{w}` denotes a point where a period is expected"))
            }
            _ => self.cur.name("constant").map(|c| PeriodExpr::Ref(Term::Const(c))),
        }
    }

    fn point(&mut self) -> Result<PointExpr, ParseError> {
        let word = match self.cur.peek().clone() {
            Tok::Ident(w) if is_point_keyword(&w) => w,
            other => return self.cur.error(format!("expected a point expression, found {other}")),
        };
        let x = match word.as_str() {
            "beg" => {
                self.cur.next();
                return Ok(PointExpr::Beg);
            }
            "now" => {
                self.cur.next();
                return Ok(PointExpr::Now);
            }
            "end" => {
                self.cur.next();
                return Ok(PointExpr::End);
            }
            "succ" => {
                self.open()?;
                PointExpr::Succ(Box::new(self.point()?))
            }
            "earliest" => {
                self.open()?;
                PointExpr::Earliest(Box::new(self.period()?))
            }
            _ => {
                self.open()?;
                PointExpr::Latest(Box::new(self.period()?))
            }
        };
        self.cur.expect(Tok::RParen)?;
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_literal_and_subper() {
        let f = parse_bot("empty(tank5, ?p) & subper(?e, ?p)").unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::lit("empty", vec![BotTerm::constant("tank5"), BotTerm::var("p")]),
                Formula::Subper(PeriodExpr::var("e"), PeriodExpr::var("p")),
            )
        );
    }

    #[test]
    fn parses_point_equations() {
        let f = parse_bot("eq(succ(latest(?m1)), earliest(?m2))").unwrap();
        assert_eq!(
            f,
            Formula::Eq(
                BotTerm::Point(PointExpr::succ(PointExpr::latest(PeriodExpr::var("m1")))),
                BotTerm::Point(PointExpr::earliest(PeriodExpr::var("m2"))),
            )
        );
    }

    #[test]
    fn parses_half_open_intervals() {
        let f = parse_bot("subper(?e, intersect([beg,end], [beg,now)))").unwrap();
        let expected = Formula::Subper(
            PeriodExpr::var("e"),
            PeriodExpr::intersect(
                PeriodExpr::whole(),
                PeriodExpr::interval(PointExpr::Beg, PointExpr::Now, true, false),
            ),
        );
        assert_eq!(f, expected);
        for text in ["subper(?e, (beg,end))", "subper(?e, (beg,end])", "subper(?e, [beg,end))"] {
            assert_eq!(parse_bot(text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn terms_may_be_periods_or_points() {
        let f = parse_bot("eq(?e, [now,now]) & max_b(h, b, intersect(y, [beg,now))) & eq(now, latest(?x))").unwrap();
        assert_eq!(parse_bot(&f.to_string()).unwrap(), f);
        assert_eq!(f.conjuncts().len(), 3);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "subper(now, ?e)",
            "prec(?e, now)",
            "eq(?e)",
            "period(?a, ?b)",
            "part(?x, ?y)",
            "empty(tank5, ?p) & empty(?p)",
            "beg(x)",
            "subper(?e, [beg,end)",
            "subper(?e, [beg,end}",
            "Past[?e, x(y)]",
        ] {
            assert!(parse_bot(bad).is_err(), "{bad:?} should not parse");
        }
    }
}
