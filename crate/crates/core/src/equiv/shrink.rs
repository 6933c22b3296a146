//! Greedy minimisation of disagreeing cases.

use super::{check_equivalence, Case};
use crate::model::{validate_model, Obj, Partitioning, TopModel};
use crate::time::{Period, Timeline};
use crate::top::Formula;
use crate::translate::Mutation;

/// Repeatedly replaces `case` by the first smaller variant that still
/// disagrees, until none does.
pub fn shrink(case: &Case, mutation: Option<Mutation>) -> Case {
    let disagrees = |c: &Case| {
        validate_model(&c.model).is_empty()
            && matches!(check_equivalence(&c.model, c.st, &c.formula, mutation), Ok(v) if !v.agree)
    };
    let mut current = case.clone();
    'search: loop {
        for candidate in candidates(&current) {
            if disagrees(&candidate) {
                current = candidate;
                continue 'search;
            }
        }
        return current;
    }
}

fn candidates(c: &Case) -> Vec<Case> {
    let with_formula = |formula| Case { formula, ..c.clone() };
    let with_model = |model| Case { model, ..c.clone() };
    let mut out: Vec<Case> = formula_variants(&c.formula).into_iter().map(with_formula).collect();

    let size = c.model.timeline().size();
    if size > 1 {
        out.extend(restrict(c, 0, size - 2));
        out.extend(restrict(c, 1, size - 1));
    }

    let m = &c.model;
    for (functor, ext) in &m.preds {
        for (args, periods) in ext {
            let mut dropped = m.clone();
            dropped.preds.get_mut(functor).unwrap().remove(args);
            out.push(with_model(dropped));
            for p in periods {
                let mut smaller = vec![None];
                if p.len() > 1 {
                    smaller.push(Period::new(p.lo() + 1, p.hi()).ok());
                    smaller.push(Period::new(p.lo(), p.hi() - 1).ok());
                }
                for replacement in smaller {
                    let mut next = m.clone();
                    let set = next.preds.get_mut(functor).unwrap().get_mut(args).unwrap();
                    set.remove(p);
                    set.extend(replacement);
                    out.push(with_model(next));
                }
            }
        }
    }
    for (functor, tuples) in &m.culms {
        for args in tuples {
            let mut next = m.clone();
            let set = next.culms.get_mut(functor).unwrap();
            set.remove(args);
            if set.is_empty() {
                next.culms.remove(functor);
            }
            out.push(with_model(next));
        }
    }
    out
}

/// Strictly smaller formulas: each sub-formula in place of its parent, and
/// `For` quantities lowered by one.
fn formula_variants(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    match f {
        Formula::And(l, r) => {
            out.push((**l).clone());
            out.push((**r).clone());
            out.extend(formula_variants(l).into_iter().map(|v| Formula::and(v, (**r).clone())));
            out.extend(formula_variants(r).into_iter().map(|v| Formula::and((**l).clone(), v)));
        }
        Formula::Culm(l) => out.push(Formula::Literal(l.clone())),
        Formula::For { part, qty, body } if *qty > 1 => {
            out.push((**body).clone());
            out.push(Formula::For { part: part.clone(), qty: qty - 1, body: body.clone() });
            out.extend(formula_variants(body).into_iter().map(|v| with_body(f, v)));
        }
        other => {
            if let Some(body) = other.body() {
                out.push(body.clone());
                out.extend(formula_variants(body).into_iter().map(|v| with_body(f, v)));
            }
        }
    }
    out
}

fn with_body(f: &Formula, body: Formula) -> Formula {
    let body = Box::new(body);
    match f {
        Formula::Pres(_) => Formula::Pres(body),
        Formula::Fills(_) => Formula::Fills(body),
        Formula::NtenseNow(_) => Formula::NtenseNow(body),
        Formula::Past { var, .. } => Formula::Past { var: var.clone(), body },
        Formula::Perf { var, .. } => Formula::Perf { var: var.clone(), body },
        Formula::NtenseVar { var, .. } => Formula::NtenseVar { var: var.clone(), body },
        Formula::At { anchor, .. } => Formula::At { anchor: anchor.clone(), body },
        Formula::Before { anchor, .. } => Formula::Before { anchor: anchor.clone(), body },
        Formula::After { anchor, .. } => Formula::After { anchor: anchor.clone(), body },
        Formula::For { part, qty, .. } => Formula::For { part: part.clone(), qty: *qty, body },
        Formula::Literal(_) | Formula::And(..) | Formula::Part { .. } | Formula::Culm(_) => {
            unreachable!("not a unary operator")
        }
    }
}

/// The case cut down to points `lo..=hi`, renumbered from 0. `None` if a
/// period constant or the speech time falls outside.
fn restrict(c: &Case, lo: usize, hi: usize) -> Option<Case> {
    let keep = Period::new(lo, hi).ok()?;
    let tl = Timeline::new(hi - lo + 1).ok()?;
    let map_period = |p: &Period| {
        let q = p.intersect(&keep).as_period()?;
        Period::new(q.lo() - lo, q.hi() - lo).ok()
    };
    let map_obj = |o: &Obj| match o {
        Obj::Atom(i) => Some(Obj::Atom(*i)),
        Obj::Period(p) => map_period(p).map(Obj::Period),
    };
    let map_args = |args: &Vec<Obj>| args.iter().map(map_obj).collect::<Option<Vec<Obj>>>();

    if !keep.contains(c.st) {
        return None;
    }
    let old = &c.model;
    let mut m = TopModel::new(tl);
    m.frame.domain = old.frame.domain.clone();
    for (name, obj) in &old.frame.consts {
        m.frame.consts.insert(name.clone(), map_obj(obj)?);
    }
    for (functor, ext) in &old.preds {
        m.declare_pred(&functor.name, functor.arity);
        for (args, periods) in ext {
            let Some(args) = map_args(args) else { continue };
            for p in periods.iter().filter_map(map_period) {
                m.add_maximal(functor, args.clone(), p);
            }
        }
    }
    for (functor, tuples) in &old.culms {
        for args in tuples.iter().filter_map(map_args) {
            m.set_culm(functor, args);
        }
    }
    let map_part = |p: &Partitioning| Partitioning {
        kind: p.kind,
        blocks: p.blocks.iter().filter_map(map_period).collect(),
    };
    m.frame.cparts = old.frame.cparts.iter().map(|(n, p)| (n.clone(), map_part(p))).collect();
    m.frame.gparts = old.frame.gparts.iter().map(|(n, p)| (n.clone(), map_part(p))).collect();
    Some(Case { index: c.index, model: m, st: c.st - lo, formula: c.formula.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::{gen_case, run_campaign, GenParams};
    use crate::top::parse_top;

    #[test]
    fn variants_are_smaller() {
        let f = parse_top("At[d1, Past[?e1, p1(o1)] & For[c1, 2, p2(o2)]]").unwrap();
        let vs = formula_variants(&f);
        assert!(vs.contains(&parse_top("Past[?e1, p1(o1)] & For[c1, 2, p2(o2)]").unwrap()));
        assert!(vs.contains(&parse_top("At[d1, Past[?e1, p1(o1)] & For[c1, 1, p2(o2)]]").unwrap()));
        assert!(vs.contains(&parse_top("At[d1, p1(o1) & For[c1, 2, p2(o2)]]").unwrap()));
        let size = |f: &Formula| {
            let mut n = 0;
            f.visit(&mut |node| {
                n += match node {
                    Formula::For { qty, .. } => 1 + *qty as usize,
                    _ => 1,
                }
            });
            n
        };
        assert!(vs.iter().all(|v| size(v) < size(&f)));
    }

    #[test]
    fn restriction_renumbers_points() {
        let case = gen_case(&GenParams::default().with_seed(5), 0);
        let size = case.model.timeline().size();
        if let Some(r) = restrict(&case, 1, size - 1) {
            assert_eq!(r.model.timeline().size(), size - 1);
            assert_eq!(r.st + 1, case.st);
            let c1 = &r.model.frame.cparts["c1"];
            assert_eq!(c1.blocks.first().map(|b| b.lo()), Some(0));
        }
        assert!(restrict(&Case { st: 0, ..case.clone() }, 1, size - 1).is_none());
    }

    #[test]
    fn shrunk_cases_still_disagree() {
        let p = GenParams::default().with_seed(3);
        let report = run_campaign(&p, 300, Some(Mutation::DropPastNarrowing));
        assert!(!report.disagreements.is_empty());
        for d in report.disagreements.iter().take(20) {
            let v = check_equivalence(&d.shrunk.model, d.shrunk.st, &d.shrunk.formula, Some(Mutation::DropPastNarrowing))
                .unwrap();
            assert!(!v.agree);
            assert!(validate_model(&d.shrunk.model).is_empty());
            let text = crate::model_file::serialize(&d.shrunk.model, d.shrunk.st);
            assert_eq!(crate::model_file::compile(&text).unwrap().model, d.shrunk.model);
            assert!(d.shrunk.formula.to_string().len() <= d.case.formula.to_string().len());
            assert!(d.shrunk.model.timeline().size() <= d.case.model.timeline().size());
        }
    }
}
