mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use topbot::bot::{denot_bot, parse_bot, print_bot};
use topbot::equiv::{check_equivalence, gen_case, gen_model, gen_speech, GenParams};
use topbot::model_file::{compile, serialize, ModelFile};
use topbot::top::{self, denot_top, denot_top_witness, eval_top_at, parse_top, EvalIndex};
use topbot::translate::{translate, TransError};
use topbot::{derive_bot_model, EtaMapping, Obj, PointSet, Term, TopModel};

/// Generation bounds, kept a little below the defaults so each case is cheap.
fn small_params() -> impl Strategy<Value = GenParams> {
    (2..=7usize, 1..=3usize, 1..=3usize, 1..=2usize, 1..=4usize, 1..=2usize, 1..=3usize, any::<u64>()).prop_map(
        |(timeline_size, atom_count, pred_count, max_arity, max_depth, max_periods, max_vars, seed)| GenParams {
            timeline_size,
            atom_count,
            pred_count,
            max_arity,
            max_depth,
            max_periods,
            max_vars,
            seed,
        },
    )
}

/// Ground literals over tuples the model lists, e.g. `p1(o2)`.
fn listed_literals(m: &TopModel) -> Vec<top::Formula> {
    let mut out = Vec::new();
    for (functor, ext) in &m.preds {
        for args in ext.keys() {
            let args = args.iter().map(|o| Term::Const(m.frame.show(o))).collect();
            out.push(top::Formula::lit(&functor.name, args));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn translation_preserves_denotation(p in small_params(), index in 0..4u64) {
        let case = gen_case(&p, index);
        let v = check_equivalence(&case.model, case.st, &case.formula, None).unwrap();
        prop_assert!(v.agree, "{} at st={}: top={} bot={}\n{}", case.formula, case.st, v.top, v.bot, v.translation);
    }

    #[test]
    fn translation_is_total_fresh_and_deterministic(f in common::top_formula()) {
        let out = match translate(&f) {
            Ok(out) => out,
            Err(TransError::EtaCollision { image, .. }) => {
                // Only legitimate when the source itself uses the image name.
                prop_assert!(f.functors().iter().any(|(name, _)| *name == image));
                return Ok(());
            }
        };
        let source = f.free_vars();
        let output = out.free_vars();
        prop_assert!(source.is_subset(&output), "{f} lost variables in {out}");
        for fresh in output.difference(&source) {
            prop_assert!(fresh.starts_with('_'), "{fresh}");
        }
        prop_assert_eq!(out.to_string(), translate(&f).unwrap().to_string());
        prop_assert_eq!(parse_bot(&print_bot(&out)).unwrap(), out);
    }

    #[test]
    fn top_round_trip(f in common::top_formula()) {
        prop_assert_eq!(parse_top(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn bot_round_trip(f in common::bot_formula()) {
        prop_assert_eq!(parse_bot(&print_bot(&f)).unwrap(), f);
    }

    #[test]
    fn model_files_round_trip(p in small_params()) {
        let m = gen_model(&p);
        let st = gen_speech(&p, m.timeline());
        let text = serialize(&m, st);
        prop_assert_eq!(compile(&text).unwrap(), ModelFile { model: m, speech: st });
    }

    #[test]
    fn denotation_is_invariant_under_renaming(p in small_params(), index in 0..4u64) {
        let case = gen_case(&p, index);
        let renamed = case.formula.map_vars(&mut |v| format!("r_{v}"));
        prop_assert_eq!(
            denot_top(&case.model, case.st, &case.formula).unwrap(),
            denot_top(&case.model, case.st, &renamed).unwrap()
        );
        let bm = derive_bot_model(&case.model, &EtaMapping::default()).unwrap();
        prop_assert_eq!(
            denot_bot(&bm, case.st, &translate(&case.formula).unwrap()).unwrap(),
            denot_bot(&bm, case.st, &translate(&renamed).unwrap()).unwrap()
        );
    }

    #[test]
    fn absent_variables_do_not_matter(p in small_params(), index in 0..4u64, extra in any::<prop::sample::Index>()) {
        let case = gen_case(&p, index);
        let m = &case.model;
        let objs: Vec<Obj> = m.frame.objects().collect();
        if let Some((mut g, et)) = denot_top_witness(m, case.st, &case.formula).unwrap() {
            let idx = EvalIndex { st: case.st, et, lt: PointSet::Period(m.timeline().all()) };
            g.insert("unused".into(), *extra.get(&objs));
            prop_assert!(eval_top_at(m, &idx, &g, &case.formula).unwrap());
        }
    }
}

/// `At[τ, Past[?e, L]]` and `At[τ, L]` agree whenever τ lies wholly before st.
#[test]
fn past_is_redundant_under_a_past_anchor() {
    let mut compared = 0;
    for seed in 0..60 {
        let m = gen_model(&GenParams::default().with_seed(seed));
        for (name, obj) in &m.frame.consts {
            let Obj::Period(tau) = obj else { continue };
            for lit in listed_literals(&m) {
                let anchor = Term::Const(name.clone());
                let with_past = top::Formula::at(anchor.clone(), top::Formula::past("e", lit.clone()));
                let without = top::Formula::at(anchor, lit);
                for st in tau.hi() + 1..m.timeline().size() {
                    assert_eq!(
                        denot_top(&m, st, &with_past).unwrap(),
                        denot_top(&m, st, &without).unwrap(),
                        "seed {seed}, st {st}: {with_past}"
                    );
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 500, "only {compared} comparisons");
}

/// Shrinking lt never turns a false literal true.
#[test]
fn literals_are_monotone_in_lt() {
    for seed in 0..20 {
        let m = gen_model(&GenParams { timeline_size: 6, ..GenParams::default().with_seed(seed) });
        let tl = *m.timeline();
        let sets: Vec<PointSet> = tl.point_sets().collect();
        let within = |a: &PointSet, b: &PointSet| match (a, b) {
            (PointSet::Empty, _) => true,
            (PointSet::Period(a), PointSet::Period(b)) => a.is_subperiod_of(b),
            (PointSet::Period(_), PointSet::Empty) => false,
        };
        for lit in listed_literals(&m) {
            for et in tl.periods() {
                let truth: BTreeMap<PointSet, bool> = sets
                    .iter()
                    .map(|&lt| (lt, eval_top_at(&m, &EvalIndex { st: 0, et, lt }, &Default::default(), &lit).unwrap()))
                    .collect();
                for (small, &t_small) in &truth {
                    for (large, &t_large) in &truth {
                        if within(small, large) {
                            assert!(!t_small || t_large, "seed {seed}: {lit} at et={et}: true in {small}, false in {large}");
                        }
                    }
                }
            }
        }
    }
}

/// The generator exercises every operator and yields both answers often.
#[test]
fn default_campaign_has_varied_cases() {
    let p = GenParams::default().with_seed(42);
    let mut answers = [0usize; 2];
    let mut ops = BTreeSet::new();
    let mut var_counts = BTreeSet::new();
    for i in 0..1000 {
        let case = gen_case(&p, i);
        answers[denot_top(&case.model, case.st, &case.formula).unwrap() as usize] += 1;
        var_counts.insert(case.formula.free_vars().len());
        case.formula.visit(&mut |f| {
            let debug = format!("{f:?}");
            ops.insert(debug[..debug.find(|c: char| !c.is_alphanumeric()).unwrap_or(debug.len())].to_string());
        });
    }
    assert!(answers.iter().all(|&n| n >= 200), "answers false/true: {answers:?}");
    assert_eq!(var_counts, BTreeSet::from([0, 1, 2, 3]));
    let all = [
        "Literal", "And", "Part", "Pres", "Past", "Perf", "Culm", "At", "Before", "After", "Fills", "NtenseVar",
        "NtenseNow", "For",
    ];
    assert_eq!(ops, all.iter().map(|s| s.to_string()).collect());
}
