//! Existential closure of BOT formulas.
//!
//! Translated formulas carry many variables, so plain enumeration over OBJS is
//! out of reach. The search binds one variable at a time and checks each
//! conjunct as soon as all its variables are bound. When a conjunct with a
//! single unbound variable pins that variable down to a few objects (an `eq`,
//! a literal, a `part`, a `subper` against a known period), only those
//! objects are tried. Every object that could satisfy the conjunct is among
//! them, so the search stays exhaustive.

use super::eval::{check_refs, eval_period, eval_term, holds, term_mentions, Value};
use super::{BotTerm, Formula, PeriodExpr};
use crate::model::{Assignment, BotModel, EvalError, Functor, Obj, Slots};
use crate::syntax::Term;
use crate::time::Point;

/// `⟦f⟧ at M, st`: true iff some assignment of the free variables satisfies `f`.
pub fn denot_bot(m: &BotModel, st: Point, f: &Formula) -> Result<bool, EvalError> {
    denot_bot_witness(m, st, f).map(|w| w.is_some())
}

/// Like [`denot_bot`], returning a satisfying assignment.
pub fn denot_bot_witness(m: &BotModel, st: Point, f: &Formula) -> Result<Option<Assignment>, EvalError> {
    check_refs(m, f)?;
    let names = f.vars_in_order();
    let atoms = f.conjuncts();
    let atom_vars: Vec<Vec<usize>> = atoms
        .iter()
        .map(|a| {
            let vs = a.vars_in_order();
            vs.iter().map(|v| names.iter().position(|n| n == v).unwrap()).collect()
        })
        .collect();
    let mut by_var = vec![Vec::new(); names.len()];
    for (i, vs) in atom_vars.iter().enumerate() {
        for &v in vs {
            by_var[v].push(i);
        }
    }
    let solver = Solver {
        m,
        st,
        atoms,
        atom_vars,
        by_var,
        objs: m.frame.objects().collect(),
    };
    let mut slots = Slots::new(&names);
    let ground_ok = solver
        .atoms
        .iter()
        .zip(&solver.atom_vars)
        .filter(|(_, vs)| vs.is_empty())
        .all(|(a, _)| holds(m, st, &slots, a));
    if ground_ok && solver.search(&mut slots) {
        Ok(Some(slots.to_assignment(solver.objs[0])))
    } else {
        Ok(None)
    }
}

struct Solver<'a> {
    m: &'a BotModel,
    st: Point,
    atoms: Vec<&'a Formula>,
    atom_vars: Vec<Vec<usize>>,
    by_var: Vec<Vec<usize>>,
    objs: Vec<Obj>,
}

impl Solver<'_> {
    fn search(&self, slots: &mut Slots<'_>) -> bool {
        let Some((var, candidates)) = self.choose(slots) else {
            return true;
        };
        for o in candidates {
            slots.values[var] = Some(o);
            let consistent = self.by_var[var].iter().all(|&a| {
                !self.atom_vars[a].iter().all(|&v| slots.values[v].is_some())
                    || holds(self.m, self.st, &*slots, self.atoms[a])
            });
            if consistent && self.search(slots) {
                return true;
            }
        }
        slots.values[var] = None;
        false
    }

    /// The next variable to bind and the objects to try; `None` once all are bound.
    fn choose(&self, slots: &Slots<'_>) -> Option<(usize, Vec<Obj>)> {
        let mut first_unbound = None;
        let mut best: Option<(usize, Vec<Obj>)> = None;
        for var in (0..slots.values.len()).filter(|&v| slots.values[v].is_none()) {
            first_unbound.get_or_insert(var);
            for &a in &self.by_var[var] {
                let last_open = self.atom_vars[a].iter().all(|&v| v == var || slots.values[v].is_some());
                if !last_open {
                    continue;
                }
                if let Some(c) = self.candidates(self.atoms[a], &slots.names[var], slots) {
                    if best.as_ref().is_none_or(|(_, b)| c.len() < b.len()) {
                        if c.is_empty() {
                            return Some((var, c));
                        }
                        best = Some((var, c));
                    }
                }
            }
        }
        best.or_else(|| first_unbound.map(|v| (v, self.objs.clone())))
    }

    /// Objects that could make `atom` true for `var`, all its other variables
    /// being bound; `None` when `atom` does not constrain `var` usefully.
    fn candidates(&self, atom: &Formula, var: &str, g: &Slots<'_>) -> Option<Vec<Obj>> {
        let (m, st) = (self.m, self.st);
        let is_var = |t: &BotTerm| matches!(t, BotTerm::Var(v) if v == var);
        let is_ref = |p: &PeriodExpr| matches!(p, PeriodExpr::Ref(Term::Var(v)) if v == var);
        let known_period = |p: &PeriodExpr| eval_period(m, st, g, p).and_then(|s| s.as_period());
        let tl = m.timeline();
        match atom {
            Formula::Eq(a, b) | Formula::Eq(b, a) if is_var(a) && !term_mentions(b, var) => {
                Some(match eval_term(m, st, g, b) {
                    Value::Obj(o) => vec![o],
                    _ => Vec::new(),
                })
            }
            Formula::Literal { functor, args } => {
                if args.iter().any(|a| !is_var(a) && term_mentions(a, var)) {
                    return None;
                }
                let known: Vec<Option<Value>> =
                    args.iter().map(|a| (!is_var(a)).then(|| eval_term(m, st, g, a))).collect();
                if known.iter().any(|k| matches!(k, Some(v) if !matches!(v, Value::Obj(_)))) {
                    return Some(Vec::new());
                }
                let pos = args.iter().position(is_var)?;
                let tuples = m.preds.get(&Functor::new(functor.clone(), args.len()));
                let mut out = Vec::new();
                for t in tuples.into_iter().flatten() {
                    let fits = t.iter().zip(&known).all(|(o, k)| match k {
                        Some(Value::Obj(k)) => k == o,
                        _ => *o == t[pos],
                    });
                    if fits && !out.contains(&t[pos]) {
                        out.push(t[pos]);
                    }
                }
                Some(out)
            }
            Formula::Part { part, term } if is_var(term) => {
                let sigma = m.frame.partitioning(part)?;
                Some(sigma.blocks.iter().map(|&b| Obj::Period(b)).collect())
            }
            Formula::Period(t) if is_var(t) => Some(tl.periods().map(Obj::Period).collect()),
            Formula::Subper(a, b) if is_ref(a) && !period_mentions(b, var) => Some(match known_period(b) {
                Some(q) => q.subperiods().map(Obj::Period).collect(),
                None => Vec::new(),
            }),
            Formula::Subper(a, b) if is_ref(b) && !period_mentions(a, var) => Some(match known_period(a) {
                Some(q) => tl.periods().filter(|p| q.is_subperiod_of(p)).map(Obj::Period).collect(),
                None => Vec::new(),
            }),
            _ => None,
        }
    }
}

fn period_mentions(p: &PeriodExpr, var: &str) -> bool {
    term_mentions(&BotTerm::Period(p.clone()), var)
}
