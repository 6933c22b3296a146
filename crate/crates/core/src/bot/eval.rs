//! Denotation of BOT terms and formulas w.r.t. a model, a speech time and an
//! assignment.

use super::{visit_bot_term, BotTerm, Formula, PeriodExpr, PointExpr};
use crate::model::{BotModel, Env, EvalError, Functor, Obj};
use crate::syntax::Term;
use crate::time::{intersect, Point, PointSet};

/// The denotation of a BOT term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Obj(Obj),
    /// The empty point-set, e.g. from a reversed interval.
    Empty,
    Point(Point),
    Undefined,
}

impl From<PointSet> for Value {
    fn from(s: PointSet) -> Self {
        match s {
            PointSet::Empty => Value::Empty,
            PointSet::Period(p) => Value::Obj(Obj::Period(p)),
        }
    }
}

fn lookup<E: Env + ?Sized>(m: &BotModel, g: &E, t: &Term) -> Option<Obj> {
    match t {
        Term::Const(c) => m.frame.consts.get(c).copied(),
        Term::Var(v) => g.lookup(v),
    }
}

/// A point, or `None` for Undefined.
pub fn eval_point<E: Env + ?Sized>(m: &BotModel, st: Point, g: &E, e: &PointExpr) -> Option<Point> {
    let tl = m.timeline();
    match e {
        PointExpr::Beg => Some(tl.first()),
        PointExpr::Now => Some(st),
        PointExpr::End => Some(tl.last()),
        PointExpr::Earliest(p) => eval_period(m, st, g, p)?.min_point(),
        PointExpr::Latest(p) => eval_period(m, st, g, p)?.max_point(),
        PointExpr::Succ(x) => tl.next(eval_point(m, st, g, x)?),
    }
}

/// A point-set, or `None` for Undefined.
pub fn eval_period<E: Env + ?Sized>(m: &BotModel, st: Point, g: &E, e: &PeriodExpr) -> Option<PointSet> {
    match e {
        PeriodExpr::Interval { lo, hi, lo_closed, hi_closed } => {
            let lo = eval_point(m, st, g, lo)? as i64 + i64::from(!lo_closed);
            let hi = eval_point(m, st, g, hi)? as i64 - i64::from(!hi_closed);
            Some(m.timeline().closed_range(lo, hi))
        }
        PeriodExpr::Intersect(a, b) => Some(intersect(eval_period(m, st, g, a)?, eval_period(m, st, g, b)?)),
        PeriodExpr::Ref(t) => lookup(m, g, t)?.as_period().map(PointSet::Period),
    }
}

pub fn eval_term<E: Env + ?Sized>(m: &BotModel, st: Point, g: &E, t: &BotTerm) -> Value {
    let v = match t {
        BotTerm::Const(c) => m.frame.consts.get(c).copied().map(Value::Obj),
        BotTerm::Var(v) => g.lookup(v).map(Value::Obj),
        BotTerm::Period(p) => eval_period(m, st, g, p).map(Value::from),
        BotTerm::Point(x) => eval_point(m, st, g, x).map(Value::Point),
    };
    v.unwrap_or(Value::Undefined)
}

/// Truth value of one formula, unbound variables counting as Undefined.
pub(crate) fn holds<E: Env + ?Sized>(m: &BotModel, st: Point, g: &E, f: &Formula) -> bool {
    let period = |e: &PeriodExpr| eval_period(m, st, g, e).and_then(|s| s.as_period());
    match f {
        Formula::And(l, r) => holds(m, st, g, l) && holds(m, st, g, r),
        Formula::Literal { functor, args } => {
            let mut objs = Vec::with_capacity(args.len());
            for a in args {
                match eval_term(m, st, g, a) {
                    Value::Obj(o) => objs.push(o),
                    _ => return false,
                }
            }
            m.holds(&Functor::new(functor.clone(), args.len()), &objs)
        }
        Formula::Subper(a, b) => match (period(a), period(b)) {
            (Some(p), Some(q)) => p.is_subperiod_of(&q),
            _ => false,
        },
        Formula::Eq(a, b) => {
            let (a, b) = (eval_term(m, st, g, a), eval_term(m, st, g, b));
            a != Value::Undefined && a == b
        }
        Formula::Period(t) => matches!(eval_term(m, st, g, t), Value::Obj(Obj::Period(_))),
        Formula::Part { part, term } => match (m.frame.partitioning(part), eval_term(m, st, g, term)) {
            (Some(sigma), Value::Obj(Obj::Period(p))) => sigma.contains(&p),
            _ => false,
        },
        Formula::Prec(a, b) => match (eval_point(m, st, g, a), eval_point(m, st, g, b)) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        },
    }
}

/// Checks that every functor, constant and partitioning `f` mentions exists in `m`.
pub fn check_refs(m: &BotModel, f: &Formula) -> Result<(), EvalError> {
    for c in f.conjuncts() {
        match c {
            Formula::Literal { functor, args } => {
                let functor = Functor::new(functor.clone(), args.len());
                if !m.preds.contains_key(&functor) {
                    return Err(EvalError::UnknownFunctor(functor));
                }
            }
            Formula::Part { part, .. } if m.frame.partitioning(part).is_none() => {
                return Err(EvalError::UnknownPartitioning(part.clone()));
            }
            _ => {}
        }
    }
    let mut missing = None;
    f.visit_terms(&mut |t| {
        if let Term::Const(c) = t {
            if missing.is_none() && !m.frame.consts.contains_key(c) {
                missing = Some(c.clone());
            }
        }
    });
    missing.map_or(Ok(()), |c| Err(EvalError::UnknownConstant(c)))
}

/// `⟦f⟧ at M, st, g`.
pub fn eval_bot<E: Env + ?Sized>(m: &BotModel, st: Point, g: &E, f: &Formula) -> Result<bool, EvalError> {
    check_refs(m, f)?;
    if let Some(v) = f.vars_in_order().into_iter().find(|v| g.lookup(v).is_none()) {
        return Err(EvalError::UnboundVariable(v));
    }
    Ok(holds(m, st, g, f))
}

pub(crate) fn term_mentions(t: &BotTerm, var: &str) -> bool {
    let mut found = false;
    visit_bot_term(t, &mut |x| found |= x.as_var() == Some(var));
    found
}
