//! Random models, speech times and TOP formulas.

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::GenParams;
use crate::model::{Functor, Obj, Partitioning, TopModel};
use crate::syntax::Term;
use crate::time::{Period, Point, Timeline};
use crate::top::{Formula, Literal};

const MODEL_STREAM: u64 = 0;
const FORMULA_STREAM: u64 = 1;
const SPEECH_STREAM: u64 = 2;

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_period(rng: &mut impl Rng, tl: &Timeline) -> Period {
    let a = rng.gen_range(0..tl.size());
    let b = rng.gen_range(0..tl.size());
    Period::new(a.min(b), a.max(b)).expect("ordered endpoints")
}

/// Up to `max` periods, pairwise separated by at least one point.
fn separated_periods(rng: &mut impl Rng, tl: &Timeline, max: usize) -> Vec<Period> {
    let want = rng.gen_range(1..=max);
    let mut out: Vec<Period> = Vec::new();
    for _ in 0..want * 4 {
        if out.len() == want {
            break;
        }
        let p = random_period(rng, tl);
        if out.iter().all(|q| q.hi() + 1 < p.lo() || p.hi() + 1 < q.lo()) {
            out.push(p);
        }
    }
    out.sort();
    out
}

/// A valid TOP model: atoms `o1…`, period constants `d1`, `d2`, predicates
/// `p1…`, a complete partitioning `c1` and a gappy one `g1`.
pub fn gen_model(p: &GenParams) -> TopModel {
    let mut rng = rng(p.seed, MODEL_STREAM);
    let tl = Timeline::new(p.timeline_size).expect("timeline size checked by GenParams");
    let mut m = TopModel::new(tl);
    let atoms: Vec<Obj> = (1..=p.atom_count).map(|i| m.frame.add_atom(&format!("o{i}"))).collect();
    for name in ["d1", "d2"] {
        m.frame.consts.insert(name.into(), Obj::Period(random_period(&mut rng, &tl)));
    }
    for i in 1..=p.pred_count {
        let arity = rng.gen_range(1..=p.max_arity);
        let functor = m.declare_pred(&format!("p{i}"), arity);
        let tuples = rng.gen_range(1..=2);
        for _ in 0..tuples {
            let args: Vec<Obj> = (0..arity).map(|_| *atoms.choose(&mut rng).expect("at least one atom")).collect();
            if m.extension(&functor, &args).is_some() {
                continue;
            }
            for period in separated_periods(&mut rng, &tl, p.max_periods) {
                m.add_maximal(&functor, args.clone(), period);
            }
            if rng.gen_bool(0.5) {
                m.set_culm(&functor, args);
            }
        }
    }
    let divisors: Vec<usize> = (1..=tl.size()).filter(|k| tl.size().is_multiple_of(*k) && *k < tl.size().max(2)).collect();
    let k = *divisors.choose(&mut rng).expect("1 divides every size");
    m.frame.cparts.insert("c1".into(), Partitioning::uniform(&tl, k));
    m.frame.gparts.insert("g1".into(), Partitioning::gappy(gappy_blocks(&mut rng, &tl)));
    m
}

/// Disjoint blocks that leave at least one point uncovered.
fn gappy_blocks(rng: &mut impl Rng, tl: &Timeline) -> Vec<Period> {
    let hole = rng.gen_range(0..tl.size());
    let mut blocks = Vec::new();
    let mut t = 0;
    while t < tl.size() {
        if t == hole || rng.gen_bool(0.4) {
            t += 1;
            continue;
        }
        let len = rng.gen_range(1..=2);
        let hi = (t + len - 1).min(tl.last());
        let hi = if (t..=hi).contains(&hole) { hole - 1 } else { hi };
        blocks.push(Period::new(t, hi).expect("block within timeline"));
        t = hi + 1;
    }
    if blocks.is_empty() && tl.size() > 1 {
        let t = if hole == 0 { 1 } else { 0 };
        blocks.push(Period::new(t, t).expect("point on timeline"));
    }
    blocks
}

/// A speech time, favouring interior points so that both past and future exist.
pub fn gen_speech(p: &GenParams, tl: &Timeline) -> Point {
    let mut rng = rng(p.seed, SPEECH_STREAM);
    if tl.size() > 2 && rng.gen_bool(0.7) {
        rng.gen_range(1..tl.last())
    } else {
        rng.gen_range(0..tl.size())
    }
}

/// A TOP formula over the functors, constants and partitionings of `m`.
///
/// Variables come from two pools: `e1…` for event times and anchors, `x` for
/// predicate arguments. No variable is used in both roles, and at most
/// `max_vars` distinct variables appear.
pub fn gen_formula(p: &GenParams, m: &TopModel) -> Formula {
    let mut g = FormulaGen {
        rng: rng(p.seed, FORMULA_STREAM),
        m,
        used: Vec::new(),
        max_vars: p.max_vars,
    };
    let depth = g.rng.gen_range(1..=p.max_depth);
    g.formula(depth)
}

struct FormulaGen<'a> {
    rng: ChaCha8Rng,
    m: &'a TopModel,
    used: Vec<String>,
    max_vars: usize,
}

#[derive(Clone, Copy)]
enum Op {
    Literal,
    And,
    Past,
    At,
    Pres,
    Perf,
    Culm,
    Before,
    After,
    Fills,
    NtenseVar,
    NtenseNow,
    For,
    Part,
}

const OPS: [(Op, u32); 14] = [
    (Op::Literal, 16),
    (Op::And, 10),
    (Op::Past, 18),
    (Op::At, 14),
    (Op::Pres, 6),
    (Op::Perf, 6),
    (Op::Culm, 6),
    (Op::Before, 5),
    (Op::After, 5),
    (Op::Fills, 3),
    (Op::NtenseVar, 3),
    (Op::NtenseNow, 3),
    (Op::For, 3),
    (Op::Part, 2),
];

impl FormulaGen<'_> {
    /// A variable from `pool` (`e` or `x`), reusing one when the budget is spent.
    fn var(&mut self, pool: &str) -> Option<String> {
        let same_pool: Vec<String> = self.used.iter().filter(|v| v.starts_with(pool)).cloned().collect();
        let can_add = self.used.len() < self.max_vars;
        if can_add && (same_pool.is_empty() || self.rng.gen_bool(0.5)) {
            let name = if pool == "x" {
                if same_pool.is_empty() {
                    "x".to_string()
                } else {
                    return same_pool.choose(&mut self.rng).cloned();
                }
            } else {
                format!("{pool}{}", same_pool.len() + 1)
            };
            self.used.push(name.clone());
            return Some(name);
        }
        same_pool.choose(&mut self.rng).cloned()
    }

    fn literal(&mut self) -> Literal {
        let functors: Vec<&Functor> = self.m.preds.keys().collect();
        let functor = (*functors.choose(&mut self.rng).expect("models have predicates")).clone();
        let listed: Vec<&Vec<Obj>> = self.m.preds[&functor].keys().collect();
        let args: Vec<Term> = if !listed.is_empty() && self.rng.gen_bool(0.6) {
            let tuple = listed.choose(&mut self.rng).expect("non-empty");
            tuple.iter().map(|o| self.arg_for(Some(*o))).collect()
        } else {
            (0..functor.arity).map(|_| self.arg_for(None)).collect()
        };
        Literal::new(functor.name, args)
    }

    fn arg_for(&mut self, obj: Option<Obj>) -> Term {
        if self.rng.gen_bool(0.25) {
            if let Some(v) = self.var("x") {
                return Term::Var(v);
            }
        }
        let atoms = &self.m.frame.domain.atoms;
        let name = match obj {
            Some(Obj::Atom(i)) => atoms[i].clone(),
            _ => atoms.choose(&mut self.rng).expect("models have atoms").clone(),
        };
        Term::Const(name)
    }

    fn anchor(&mut self) -> Term {
        if self.rng.gen_bool(0.3) {
            if let Some(v) = self.var("e") {
                return Term::Var(v);
            }
        }
        if self.rng.gen_bool(0.1) {
            let atoms = &self.m.frame.domain.atoms;
            return Term::Const(atoms.choose(&mut self.rng).expect("models have atoms").clone());
        }
        Term::Const(if self.rng.gen_bool(0.5) { "d1" } else { "d2" }.into())
    }

    fn part_name(&mut self) -> String {
        let names: Vec<&String> = self.m.frame.cparts.keys().chain(self.m.frame.gparts.keys()).collect();
        (*names.choose(&mut self.rng).expect("models have partitionings")).clone()
    }

    fn leaf(&mut self) -> Formula {
        if self.rng.gen_bool(0.1) {
            let part = self.part_name();
            if let Some(var) = self.var("e") {
                return Formula::Part { part, var };
            }
        }
        Formula::Literal(self.literal())
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth <= 1 {
            return self.leaf();
        }
        let weights = WeightedIndex::new(OPS.iter().map(|(_, w)| *w)).expect("positive weights");
        let op = OPS[weights.sample(&mut self.rng)].0;
        let sub = depth - 1;
        let body = |g: &mut Self| Box::new(g.formula(sub));
        match op {
            Op::Literal => Formula::Literal(self.literal()),
            Op::Part => self.leaf(),
            Op::Culm => Formula::Culm(self.literal()),
            Op::And => {
                let (dl, dr) = (self.rng.gen_range(1..=sub), self.rng.gen_range(1..=sub));
                let l = self.formula(dl);
                let r = self.formula(dr);
                Formula::and(l, r)
            }
            Op::Pres => Formula::Pres(body(self)),
            Op::Fills => Formula::Fills(body(self)),
            Op::NtenseNow => Formula::NtenseNow(body(self)),
            Op::Past | Op::Perf | Op::NtenseVar => {
                let Some(var) = self.var("e") else {
                    return Formula::Pres(body(self));
                };
                let body = body(self);
                match op {
                    Op::Past => Formula::Past { var, body },
                    Op::Perf => Formula::Perf { var, body },
                    _ => Formula::NtenseVar { var, body },
                }
            }
            Op::At | Op::Before | Op::After => {
                let anchor = self.anchor();
                let body = body(self);
                match op {
                    Op::At => Formula::At { anchor, body },
                    Op::Before => Formula::Before { anchor, body },
                    _ => Formula::After { anchor, body },
                }
            }
            Op::For => {
                let part = self.m.frame.cparts.keys().next().expect("models have a cpart").clone();
                let qty = self.rng.gen_range(1..=3);
                Formula::For { part, qty, body: body(self) }
            }
        }
    }
}
