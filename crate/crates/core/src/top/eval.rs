//! Denotation of TOP formulas.
//!
//! The internal evaluator is three-valued: `None` means the value depends on a
//! variable the (partial) assignment does not bind yet. Brute-force search
//! uses that to cut branches as soon as a conjunct is already false.

use super::{Formula, Literal, Term};
use crate::model::{Assignment, Env, EvalError, Functor, Obj, Slots, TopModel};
use crate::time::{intersect, subper, Period, Point, PointSet};

/// An index of evaluation `⟨st, et, lt⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalIndex {
    pub st: Point,
    pub et: Period,
    pub lt: PointSet,
}

/// Checks that every functor, constant and partitioning `f` mentions exists in `m`.
pub fn check_refs(m: &TopModel, f: &Formula) -> Result<(), EvalError> {
    let mut result = Ok(());
    let check_term = |t: &Term| match t {
        Term::Const(c) if !m.frame.consts.contains_key(c) => Err(EvalError::UnknownConstant(c.clone())),
        _ => Ok(()),
    };
    let check_lit = |l: &Literal| {
        let functor = Functor::new(l.functor.clone(), l.args.len());
        if !m.preds.contains_key(&functor) {
            return Err(EvalError::UnknownFunctor(functor));
        }
        l.args.iter().try_for_each(check_term)
    };
    f.visit(&mut |node| {
        if result.is_err() {
            return;
        }
        result = match node {
            Formula::Literal(l) | Formula::Culm(l) => check_lit(l),
            Formula::Part { part, .. } if m.frame.partitioning(part).is_none() => {
                Err(EvalError::UnknownPartitioning(part.clone()))
            }
            Formula::For { part, .. } if !m.frame.cparts.contains_key(part) => {
                Err(EvalError::UnknownPartitioning(part.clone()))
            }
            Formula::At { anchor, .. } | Formula::Before { anchor, .. } | Formula::After { anchor, .. } => {
                check_term(anchor)
            }
            _ => Ok(()),
        };
    });
    result
}

/// `⟦f⟧ at M, st, et, lt, g`.
pub fn eval_top_at(m: &TopModel, idx: &EvalIndex, g: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    check_refs(m, f)?;
    if let Some(v) = f.vars_in_order().into_iter().find(|v| !g.contains_key(v)) {
        return Err(EvalError::UnboundVariable(v));
    }
    let ev = Evaluator { m, st: idx.st, env: g };
    Ok(ev.eval(idx.et, idx.lt, f).unwrap_or(false))
}

/// `⟦f⟧ at M, st`: true iff some assignment of the free variables and some
/// event time make `f` true with `lt` covering the whole timeline.
pub fn denot_top(m: &TopModel, st: Point, f: &Formula) -> Result<bool, EvalError> {
    denot_top_witness(m, st, f).map(|w| w.is_some())
}

/// Like [`denot_top`], returning the first witness `(g, et)` in enumeration order.
pub fn denot_top_witness(m: &TopModel, st: Point, f: &Formula) -> Result<Option<(Assignment, Period)>, EvalError> {
    check_refs(m, f)?;
    let vars = f.vars_in_order();
    let objs: Vec<Obj> = m.frame.objects().collect();
    let lt = PointSet::Period(m.timeline().all());
    for et in m.timeline().periods() {
        let mut slots = Slots::new(&vars);
        if search(m, st, et, lt, f, &objs, &mut slots, 0) {
            return Ok(Some((slots.to_assignment(objs[0]), et)));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn search(
    m: &TopModel,
    st: Point,
    et: Period,
    lt: PointSet,
    f: &Formula,
    objs: &[Obj],
    slots: &mut Slots<'_>,
    next: usize,
) -> bool {
    let verdict = Evaluator { m, st, env: &*slots }.eval(et, lt, f);
    match verdict {
        Some(v) => v,
        None if next == slots.names.len() => false,
        None => {
            for &o in objs {
                slots.values[next] = Some(o);
                if search(m, st, et, lt, f, objs, slots, next + 1) {
                    return true;
                }
            }
            slots.values[next] = None;
            false
        }
    }
}

fn and3(a: Option<bool>, b: impl FnOnce() -> Option<bool>) -> Option<bool> {
    match a {
        Some(false) => Some(false),
        Some(true) => b(),
        None => match b() {
            Some(false) => Some(false),
            _ => None,
        },
    }
}

pub(crate) struct Evaluator<'a, E: Env + ?Sized> {
    pub m: &'a TopModel,
    pub st: Point,
    pub env: &'a E,
}

impl<E: Env + ?Sized> Evaluator<'_, E> {
    fn term(&self, t: &Term) -> Option<Obj> {
        match t {
            Term::Const(c) => self.m.frame.consts.get(c).copied(),
            Term::Var(v) => self.env.lookup(v),
        }
    }

    fn args(&self, l: &Literal) -> Option<Vec<Obj>> {
        l.args.iter().map(|t| self.term(t)).collect()
    }

    fn functor(l: &Literal) -> Functor {
        Functor::new(l.functor.clone(), l.args.len())
    }

    /// `Some(false)` unless `g(var)` is the given period; `None` if unbound.
    fn binds_to(&self, var: &str, et: Period) -> Option<bool> {
        self.env.lookup(var).map(|o| o == Obj::Period(et))
    }

    fn anchor(&self, anchor: &Term) -> Option<Option<Period>> {
        self.term(anchor).map(|o| o.as_period())
    }

    pub fn eval(&self, et: Period, lt: PointSet, f: &Formula) -> Option<bool> {
        let tl = self.m.timeline();
        let whole = PointSet::Period(tl.all());
        match f {
            Formula::Literal(l) => {
                if !subper(et.into(), lt) {
                    return Some(false);
                }
                let args = self.args(l)?;
                let holds = self
                    .m
                    .extension(&Self::functor(l), &args)
                    .is_some_and(|ext| ext.iter().any(|p| et.is_subperiod_of(p)));
                Some(holds)
            }
            Formula::And(a, b) => and3(self.eval(et, lt, a), || self.eval(et, lt, b)),
            Formula::Part { part, var } => {
                let obj = self.env.lookup(var)?;
                let blocks = self.m.frame.partitioning(part);
                Some(matches!((obj, blocks), (Obj::Period(p), Some(b)) if b.contains(&p)))
            }
            Formula::Pres(body) => {
                if !et.contains(self.st) {
                    return Some(false);
                }
                self.eval(et, lt, body)
            }
            Formula::Past { var, body } => {
                let past = tl.closed_range(0, self.st as i64 - 1);
                and3(self.binds_to(var, et), || self.eval(et, intersect(lt, past), body))
            }
            Formula::Culm(l) => {
                if !subper(et.into(), lt) {
                    return Some(false);
                }
                let args = self.args(l)?;
                let functor = Self::functor(l);
                if !self.m.culminates(&functor, &args) {
                    return Some(false);
                }
                let ext = match self.m.extension(&functor, &args) {
                    Some(ext) if !ext.is_empty() => ext,
                    _ => return Some(false),
                };
                let first = ext.iter().map(|p| p.lo()).min();
                let last = ext.iter().map(|p| p.hi()).max();
                Some(first == Some(et.lo()) && last == Some(et.hi()))
            }
            Formula::At { anchor, body } => match self.anchor(anchor)? {
                Some(p) => self.eval(et, intersect(lt, p.into()), body),
                None => Some(false),
            },
            Formula::Before { anchor, body } => match self.anchor(anchor)? {
                Some(p) => self.eval(et, intersect(lt, tl.closed_range(0, p.lo() as i64 - 1)), body),
                None => Some(false),
            },
            Formula::After { anchor, body } => match self.anchor(anchor)? {
                Some(p) => self.eval(et, intersect(lt, tl.closed_range(p.hi() as i64 + 1, tl.last() as i64)), body),
                None => Some(false),
            },
            Formula::Fills(body) => {
                if PointSet::Period(et) != lt {
                    return Some(false);
                }
                self.eval(et, lt, body)
            }
            Formula::NtenseVar { var, body } => match self.env.lookup(var)? {
                Obj::Period(inner) => self.eval(inner, whole, body),
                Obj::Atom(_) => Some(false),
            },
            Formula::NtenseNow(body) => self.eval(Period::point(self.st), whole, body),
            Formula::For { part, qty, body } => {
                let chained = self
                    .m
                    .frame
                    .cparts
                    .get(part)
                    .is_some_and(|cp| spans_blocks(cp, *qty, et, |t| tl.next(t)));
                if !chained {
                    return Some(false);
                }
                self.eval(et, lt, body)
            }
            Formula::Perf { var, body } => {
                if !subper(et.into(), lt) {
                    return Some(false);
                }
                match self.env.lookup(var)? {
                    Obj::Period(inner) if inner.hi() < et.lo() => self.eval(inner, whole, body),
                    _ => Some(false),
                }
            }
        }
    }
}

/// True iff `qty` consecutive blocks of `cp`, the first starting at
/// `minpt(et)`, end exactly at `maxpt(et)`.
fn spans_blocks(
    cp: &crate::model::Partitioning,
    qty: u32,
    et: Period,
    next: impl Fn(Point) -> Option<Point>,
) -> bool {
    let Some(mut block) = cp.block_starting_at(et.lo()) else {
        return false;
    };
    for _ in 1..qty {
        let Some(start) = next(block.hi()) else {
            return false;
        };
        match cp.block_starting_at(start) {
            Some(b) => block = b,
            None => return false,
        }
    }
    block.hi() == et.hi()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::m0;
    use crate::time::Timeline;
    use crate::top::parse_top;

    fn per(lo: Point, hi: Point) -> Period {
        Period::new(lo, hi).unwrap()
    }

    fn idx(st: Point, et: Period, lt: PointSet) -> EvalIndex {
        EvalIndex { st, et, lt }
    }

    fn eval(st: Point, et: Period, lt: Period, g: &[(&str, Period)], text: &str) -> bool {
        let g: Assignment = g.iter().map(|(v, p)| (v.to_string(), Obj::Period(*p))).collect();
        eval_top_at(&m0(), &idx(st, et, lt.into()), &g, &parse_top(text).unwrap()).unwrap()
    }

    #[test]
    fn literal_clause() {
        assert!(eval(7, per(3, 4), per(3, 4), &[], "empty(tank5)"));
        assert!(!eval(7, per(3, 4), per(3, 3), &[], "empty(tank5)"));
        assert!(!eval(7, per(1, 4), per(0, 9), &[], "empty(tank5)"));
    }

    #[test]
    fn past_clause_narrows_lt() {
        assert!(eval(7, per(3, 4), per(0, 9), &[("e", per(3, 4))], "Past[?e, empty(tank5)]"));
        assert!(!eval(7, per(3, 4), per(0, 9), &[("e", per(3, 5))], "Past[?e, empty(tank5)]"));
        assert!(!eval(4, per(3, 4), per(0, 9), &[("e", per(3, 4))], "Past[?e, empty(tank5)]"));
    }

    #[test]
    fn pres_clause_requires_st_in_et() {
        assert!(!eval(7, per(3, 4), per(0, 9), &[], "Pres[empty(tank5)]"));
        assert!(eval(4, per(3, 4), per(0, 9), &[], "Pres[empty(tank5)]"));
        // no et ⊑ lt check at the Pres level itself
        assert!(eval(4, per(4, 4), per(0, 0), &[("m", per(4, 4))], "Pres[Part[minute, ?m]]"));
    }

    #[test]
    fn culm_clause_uses_first_start_and_last_stop() {
        let f = "Culm[building(housecorp, bridge2)]";
        assert!(eval(7, per(1, 5), per(0, 9), &[], f));
        assert!(!eval(7, per(1, 2), per(0, 9), &[], f));
        assert!(!eval(7, per(1, 5), per(0, 4), &[], f));
        assert!(!eval(7, per(0, 1), per(0, 9), &[], "Culm[empty(tank5)]"));
    }

    #[test]
    fn at_before_after_clauses() {
        assert!(eval(7, per(3, 4), per(0, 9), &[], "At[d_jan, empty(tank5)]"));
        assert!(!eval(7, per(2, 4), per(0, 9), &[], "At[d_jan, empty(tank5)]"));
        assert!(!eval(7, per(3, 4), per(0, 9), &[], "At[tank5, empty(tank5)]"));
        assert!(eval(7, per(2, 2), per(0, 9), &[], "Before[d_jan, empty(tank5)]"));
        assert!(!eval(7, per(3, 3), per(0, 9), &[], "Before[d_jan, empty(tank5)]"));
        assert!(eval(7, per(5, 5), per(0, 9), &[], "After[d_jan, empty(tank5)]"));
        assert!(!eval(7, per(4, 5), per(0, 9), &[], "After[d_jan, empty(tank5)]"));
    }

    #[test]
    fn fills_clause() {
        assert!(eval(7, per(3, 4), per(3, 4), &[], "Fills[empty(tank5)]"));
        assert!(!eval(7, per(3, 3), per(3, 4), &[], "Fills[empty(tank5)]"));
    }

    #[test]
    fn ntense_clauses_reset_the_index() {
        let g = [("e", per(2, 5))];
        assert!(eval(7, per(9, 9), per(8, 9), &g, "Ntense[?e, empty(tank5)]"));
        assert!(!eval(7, per(9, 9), per(8, 9), &[("e", per(1, 5))], "Ntense[?e, empty(tank5)]"));
        assert!(!eval(7, per(3, 3), per(3, 3), &[], "Ntense[now, empty(tank5)]"));
        assert!(eval(4, per(9, 9), per(9, 9), &[], "Ntense[now, empty(tank5)]"));
    }

    #[test]
    fn for_clause_walks_blocks() {
        assert!(eval(7, per(2, 3), per(0, 9), &[], "For[minute, 2, empty(tank5)]"));
        assert!(!eval(7, per(2, 4), per(0, 9), &[], "For[minute, 2, empty(tank5)]"));
        assert!(eval(7, per(3, 3), per(0, 9), &[], "For[minute, 1, empty(tank5)]"));
        // the chain would run past the end of time
        assert!(!eval(7, per(2, 9), per(0, 9), &[], "For[minute, 9, empty(tank5)]"));
    }

    #[test]
    fn perf_clause() {
        let f = "Perf[?e2, Culm[building(housecorp, bridge2)]]";
        assert!(eval(7, per(6, 6), per(0, 9), &[("e2", per(1, 5))], f));
        assert!(!eval(7, per(5, 6), per(0, 9), &[("e2", per(1, 5))], f));
        assert!(!eval(7, per(6, 6), per(0, 5), &[("e2", per(1, 5))], f));
    }

    #[test]
    fn part_clause() {
        assert!(eval(7, per(0, 0), per(0, 9), &[("f", per(7, 7))], "Part[fivepm, ?f]"));
        assert!(!eval(7, per(0, 0), per(0, 9), &[("f", per(6, 7))], "Part[fivepm, ?f]"));
    }

    #[test]
    fn errors() {
        let m = m0();
        let i = idx(7, per(3, 4), per(0, 9).into());
        let g = Assignment::new();
        assert_eq!(
            eval_top_at(&m, &i, &g, &parse_top("Past[?e, empty(tank5)]").unwrap()),
            Err(EvalError::UnboundVariable("e".into()))
        );
        assert_eq!(
            eval_top_at(&m, &i, &g, &parse_top("full(tank5)").unwrap()),
            Err(EvalError::UnknownFunctor(Functor::new("full", 1)))
        );
        assert_eq!(
            eval_top_at(&m, &i, &g, &parse_top("For[fivepm, 1, empty(tank5)]").unwrap()),
            Err(EvalError::UnknownPartitioning("fivepm".into()))
        );
        assert_eq!(
            denot_top(&m, 7, &parse_top("empty(tank6)").unwrap()),
            Err(EvalError::UnknownConstant("tank6".into()))
        );
    }

    #[test]
    fn denotation_examples() {
        let m = m0();
        let f = parse_top("At[d_jan, Past[?e, empty(tank5)]]").unwrap();
        let (g, et) = denot_top_witness(&m, 7, &f).unwrap().unwrap();
        assert!(et.is_subperiod_of(&per(3, 4)));
        assert_eq!(g["e"], Obj::Period(et));
        assert!(!denot_top(&m, 2, &f).unwrap());

        let fills = parse_top("At[d_jan, Past[?e, Fills[empty(tank5)]]]").unwrap();
        assert!(denot_top(&m, 7, &fills).unwrap());
        let mut shorter = m.clone();
        let empty = Functor::new("empty", 1);
        let tank5 = m.frame.domain.atom("tank5").unwrap();
        shorter.preds.get_mut(&empty).unwrap().insert(vec![tank5], [per(4, 5)].into());
        assert!(!denot_top(&shorter, 7, &fills).unwrap());
        assert!(denot_top(&shorter, 7, &f).unwrap());
    }

    // Naive oracle: enumerate every full assignment and every et, no pruning.
    fn denot_naive(m: &TopModel, st: Point, f: &Formula) -> bool {
        let vars = f.vars_in_order();
        let objs: Vec<Obj> = m.frame.objects().collect();
        let total = objs.len().pow(vars.len() as u32);
        let lt = PointSet::Period(m.timeline().all());
        (0..total).any(|mut code| {
            let mut g = Assignment::new();
            for v in &vars {
                g.insert(v.clone(), objs[code % objs.len()]);
                code /= objs.len();
            }
            m.timeline()
                .periods()
                .any(|et| eval_top_at(m, &idx(st, et, lt), &g, f).unwrap())
        })
    }

    #[test]
    fn pruned_search_matches_naive_enumeration() {
        let m = m0();
        for text in [
            "At[d_jan, Past[?e, empty(tank5)]]",
            "Past[?e1, Perf[?e2, Culm[building(housecorp, bridge2)]]]",
            "Part[fivepm, ?f] & After[?f, Past[?e, empty(tank5)]]",
            "Part[fivepm, ?f] & Before[?f, Past[?e, empty(tank5)]]",
            "Ntense[?e, empty(tank5)] & Pres[Part[minute, ?e]]",
            "For[minute, 3, Past[?e, empty(tank5)]]",
            "Ntense[now, building(?x, bridge2)]",
        ] {
            let f = parse_top(text).unwrap();
            for st in 0..10 {
                assert_eq!(denot_top(&m, st, &f).unwrap(), denot_naive(&m, st, &f), "{text} at {st}");
            }
        }
    }

    #[test]
    fn homogeneity_on_m0() {
        let m = m0();
        let tl = Timeline::new(10).unwrap();
        for text in ["empty(tank5)", "building(housecorp, bridge2)", "inspecting(jadams, ba737)"] {
            let f = parse_top(text).unwrap();
            for lt in tl.point_sets() {
                for et in tl.periods() {
                    let g = Assignment::new();
                    if eval_top_at(&m, &idx(7, et, lt), &g, &f).unwrap() {
                        for sub in et.subperiods() {
                            assert!(eval_top_at(&m, &idx(7, sub, lt), &g, &f).unwrap());
                        }
                    }
                }
            }
        }
    }
}
