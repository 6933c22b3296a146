//! BOT: a first-order language with point and period expressions.

mod eval;
mod parse;
mod solve;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{check_refs, eval_bot, eval_period, eval_point, eval_term, Value};
pub use parse::parse_bot;
pub use solve::{denot_bot, denot_bot_witness};

pub use crate::syntax::Term;

/// An expression denoting a time-point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PointExpr {
    Beg,
    Now,
    End,
    Earliest(Box<PeriodExpr>),
    Latest(Box<PeriodExpr>),
    Succ(Box<PointExpr>),
}

/// An expression denoting a set of points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PeriodExpr {
    Interval { lo: Box<PointExpr>, hi: Box<PointExpr>, lo_closed: bool, hi_closed: bool },
    Intersect(Box<PeriodExpr>, Box<PeriodExpr>),
    /// A constant or variable used where a period is expected.
    Ref(Term),
}

impl PeriodExpr {
    pub fn closed(lo: PointExpr, hi: PointExpr) -> Self {
        Self::interval(lo, hi, true, true)
    }

    pub fn interval(lo: PointExpr, hi: PointExpr, lo_closed: bool, hi_closed: bool) -> Self {
        PeriodExpr::Interval { lo: Box::new(lo), hi: Box::new(hi), lo_closed, hi_closed }
    }

    pub fn intersect(a: PeriodExpr, b: PeriodExpr) -> Self {
        PeriodExpr::Intersect(Box::new(a), Box::new(b))
    }

    pub fn var(name: impl Into<String>) -> Self {
        PeriodExpr::Ref(Term::Var(name.into()))
    }

    /// `[beg, end]`
    pub fn whole() -> Self {
        Self::closed(PointExpr::Beg, PointExpr::End)
    }

    /// `[now, now]`
    pub fn now() -> Self {
        Self::closed(PointExpr::Now, PointExpr::Now)
    }
}

impl PointExpr {
    pub fn earliest(p: PeriodExpr) -> Self {
        PointExpr::Earliest(Box::new(p))
    }

    pub fn latest(p: PeriodExpr) -> Self {
        PointExpr::Latest(Box::new(p))
    }

    pub fn succ(x: PointExpr) -> Self {
        PointExpr::Succ(Box::new(x))
    }
}

/// An argument of a literal, `eq`, `period` or `part`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BotTerm {
    Const(String),
    Var(String),
    /// Never holds a [`PeriodExpr::Ref`]; use `From<PeriodExpr>` to build one.
    Period(PeriodExpr),
    Point(PointExpr),
}

impl BotTerm {
    pub fn var(name: impl Into<String>) -> Self {
        BotTerm::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        BotTerm::Const(name.into())
    }
}

impl From<Term> for BotTerm {
    fn from(t: Term) -> Self {
        match t {
            Term::Const(c) => BotTerm::Const(c),
            Term::Var(v) => BotTerm::Var(v),
        }
    }
}

impl From<PeriodExpr> for BotTerm {
    fn from(p: PeriodExpr) -> Self {
        match p {
            PeriodExpr::Ref(t) => t.into(),
            other => BotTerm::Period(other),
        }
    }
}

impl From<PointExpr> for BotTerm {
    fn from(p: PointExpr) -> Self {
        BotTerm::Point(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Literal { functor: String, args: Vec<BotTerm> },
    And(Box<Formula>, Box<Formula>),
    Subper(PeriodExpr, PeriodExpr),
    Eq(BotTerm, BotTerm),
    Period(BotTerm),
    Part { part: String, term: BotTerm },
    /// `prec(ξ₁, ξ₂)`: the first point strictly precedes the second.
    Prec(PointExpr, PointExpr),
}

impl Formula {
    pub fn lit(functor: impl Into<String>, args: Vec<BotTerm>) -> Self {
        Formula::Literal { functor: functor.into(), args }
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    /// Right-nested conjunction of `fs`; `None` when empty.
    pub fn conj(fs: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        let mut items: Vec<Formula> = fs.into_iter().flat_map(|f| f.into_conjuncts()).collect();
        let mut acc = items.pop()?;
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        Some(acc)
    }

    pub fn into_conjuncts(self) -> Vec<Formula> {
        match self {
            Formula::And(l, r) => {
                let mut v = l.into_conjuncts();
                v.extend(r.into_conjuncts());
                v
            }
            other => vec![other],
        }
    }

    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(l, r) => {
                let mut v = l.conjuncts();
                v.extend(r.conjuncts());
                v
            }
            other => vec![other],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.vars_in_order().into_iter().collect()
    }

    /// Variables in order of first occurrence.
    pub fn vars_in_order(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit_terms(&mut |t| {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        });
        out
    }

    /// Every constant or variable occurrence, left to right.
    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Literal { args, .. } => args.iter().for_each(|a| visit_bot_term(a, f)),
            Formula::And(l, r) => {
                l.visit_terms(f);
                r.visit_terms(f);
            }
            Formula::Subper(a, b) => {
                visit_period(a, f);
                visit_period(b, f);
            }
            Formula::Eq(a, b) => {
                visit_bot_term(a, f);
                visit_bot_term(b, f);
            }
            Formula::Period(t) | Formula::Part { term: t, .. } => visit_bot_term(t, f),
            Formula::Prec(a, b) => {
                visit_point(a, f);
                visit_point(b, f);
            }
        }
    }

    /// A copy of `self` with every variable renamed by `rename`.
    pub fn map_vars(&self, rename: &mut impl FnMut(&str) -> String) -> Formula {
        match self {
            Formula::Literal { functor, args } => Formula::Literal {
                functor: functor.clone(),
                args: args.iter().map(|a| a.map_vars(rename)).collect(),
            },
            Formula::And(l, r) => {
                let l = l.map_vars(rename);
                Formula::and(l, r.map_vars(rename))
            }
            Formula::Subper(a, b) => {
                let a = a.map_vars(rename);
                Formula::Subper(a, b.map_vars(rename))
            }
            Formula::Eq(a, b) => {
                let a = a.map_vars(rename);
                Formula::Eq(a, b.map_vars(rename))
            }
            Formula::Period(t) => Formula::Period(t.map_vars(rename)),
            Formula::Part { part, term } => Formula::Part { part: part.clone(), term: term.map_vars(rename) },
            Formula::Prec(a, b) => {
                let a = a.map_vars(rename);
                Formula::Prec(a, b.map_vars(rename))
            }
        }
    }

    pub fn functors(&self) -> BTreeSet<(String, usize)> {
        self.conjuncts()
            .into_iter()
            .filter_map(|c| match c {
                Formula::Literal { functor, args } => Some((functor.clone(), args.len())),
                _ => None,
            })
            .collect()
    }
}

fn map_term(t: &Term, rename: &mut impl FnMut(&str) -> String) -> Term {
    match t {
        Term::Var(v) => Term::Var(rename(v)),
        c => c.clone(),
    }
}

impl BotTerm {
    pub fn map_vars(&self, rename: &mut impl FnMut(&str) -> String) -> BotTerm {
        match self {
            BotTerm::Const(c) => BotTerm::Const(c.clone()),
            BotTerm::Var(v) => BotTerm::Var(rename(v)),
            BotTerm::Period(p) => BotTerm::Period(p.map_vars(rename)),
            BotTerm::Point(x) => BotTerm::Point(x.map_vars(rename)),
        }
    }
}

impl PeriodExpr {
    pub fn map_vars(&self, rename: &mut impl FnMut(&str) -> String) -> PeriodExpr {
        match self {
            PeriodExpr::Interval { lo, hi, lo_closed, hi_closed } => {
                let lo = lo.map_vars(rename);
                PeriodExpr::interval(lo, hi.map_vars(rename), *lo_closed, *hi_closed)
            }
            PeriodExpr::Intersect(a, b) => {
                let a = a.map_vars(rename);
                PeriodExpr::intersect(a, b.map_vars(rename))
            }
            PeriodExpr::Ref(t) => PeriodExpr::Ref(map_term(t, rename)),
        }
    }
}

impl PointExpr {
    pub fn map_vars(&self, rename: &mut impl FnMut(&str) -> String) -> PointExpr {
        match self {
            PointExpr::Beg => PointExpr::Beg,
            PointExpr::Now => PointExpr::Now,
            PointExpr::End => PointExpr::End,
            PointExpr::Earliest(p) => PointExpr::earliest(p.map_vars(rename)),
            PointExpr::Latest(p) => PointExpr::latest(p.map_vars(rename)),
            PointExpr::Succ(x) => PointExpr::succ(x.map_vars(rename)),
        }
    }
}

pub(crate) fn visit_bot_term(t: &BotTerm, f: &mut impl FnMut(&Term)) {
    match t {
        BotTerm::Const(c) => f(&Term::Const(c.clone())),
        BotTerm::Var(v) => f(&Term::Var(v.clone())),
        BotTerm::Period(p) => visit_period(p, f),
        BotTerm::Point(x) => visit_point(x, f),
    }
}

pub(crate) fn visit_period(p: &PeriodExpr, f: &mut impl FnMut(&Term)) {
    match p {
        PeriodExpr::Interval { lo, hi, .. } => {
            visit_point(lo, f);
            visit_point(hi, f);
        }
        PeriodExpr::Intersect(a, b) => {
            visit_period(a, f);
            visit_period(b, f);
        }
        PeriodExpr::Ref(t) => f(t),
    }
}

pub(crate) fn visit_point(x: &PointExpr, f: &mut impl FnMut(&Term)) {
    match x {
        PointExpr::Beg | PointExpr::Now | PointExpr::End => {}
        PointExpr::Earliest(p) | PointExpr::Latest(p) => visit_period(p, f),
        PointExpr::Succ(x) => visit_point(x, f),
    }
}

impl fmt::Display for PointExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointExpr::Beg => f.write_str("beg"),
            PointExpr::Now => f.write_str("now"),
            PointExpr::End => f.write_str("end"),
            PointExpr::Earliest(p) => write!(f, "earliest({p})"),
            PointExpr::Latest(p) => write!(f, "latest({p})"),
            PointExpr::Succ(x) => write!(f, "succ({x})"),
        }
    }
}

impl fmt::Display for PeriodExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodExpr::Interval { lo, hi, lo_closed, hi_closed } => {
                let open = if *lo_closed { '[' } else { '(' };
                let close = if *hi_closed { ']' } else { ')' };
                write!(f, "{open}{lo},{hi}{close}")
            }
            PeriodExpr::Intersect(a, b) => write!(f, "intersect({a}, {b})"),
            PeriodExpr::Ref(t) => t.fmt(f),
        }
    }
}

impl fmt::Display for BotTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BotTerm::Const(c) => f.write_str(c),
            BotTerm::Var(v) => write!(f, "?{v}"),
            BotTerm::Period(p) => p.fmt(f),
            BotTerm::Point(x) => x.fmt(f),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Literal { functor, args } => {
                write!(f, "{functor}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Formula::And(l, r) => {
                if matches!(**l, Formula::And(..)) {
                    write!(f, "({l}) & {r}")
                } else {
                    write!(f, "{l} & {r}")
                }
            }
            Formula::Subper(a, b) => write!(f, "subper({a}, {b})"),
            Formula::Eq(a, b) => write!(f, "eq({a}, {b})"),
            Formula::Period(t) => write!(f, "period({t})"),
            Formula::Part { part, term } => write!(f, "part({part}, {term})"),
            Formula::Prec(a, b) => write!(f, "prec({a}, {b})"),
        }
    }
}

/// Canonical concrete syntax.
pub fn print_bot(f: &Formula) -> String {
    f.to_string()
}
