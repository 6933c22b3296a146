//! Proptest strategies for arbitrary TOP and BOT syntax trees. They cover
//! every constructor, with no regard for whether a model defines the names.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use topbot::bot::{self, BotTerm, PeriodExpr, PointExpr};
use topbot::top::{self, Literal};
use topbot::Term;

fn constant() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["tank5", "d_jan", "o1", "housecorp", "y1997", "a_b"]).prop_map(String::from)
}

fn var() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["e", "e1", "x", "p", "_et0", "lt2"]).prop_map(String::from)
}

/// A functor name with its arity; parsers reject a functor used at two arities.
fn functor() -> impl Strategy<Value = (String, usize)> {
    prop::sample::select(vec![("empty", 1), ("building", 2), ("p1", 1), ("cmp_building", 2), ("max_x", 3)])
        .prop_map(|(f, n)| (f.to_string(), n))
}

fn part_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["minute", "fivepm", "c1", "g1"]).prop_map(String::from)
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![constant().prop_map(Term::Const), var().prop_map(Term::Var)]
}

fn top_literal() -> impl Strategy<Value = Literal> {
    functor().prop_flat_map(|(f, n)| prop::collection::vec(term(), n).prop_map(move |args| Literal::new(f.clone(), args)))
}

pub fn top_formula() -> impl Strategy<Value = top::Formula> {
    use top::Formula as F;
    let leaf = prop_oneof![
        3 => top_literal().prop_map(F::Literal),
        1 => (part_name(), var()).prop_map(|(part, var)| F::Part { part, var }),
        1 => top_literal().prop_map(F::Culm),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        let body = inner.clone().prop_map(Box::new);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| F::and(l, r)),
            body.clone().prop_map(F::Pres),
            body.clone().prop_map(F::Fills),
            body.clone().prop_map(F::NtenseNow),
            (var(), body.clone()).prop_map(|(var, body)| F::Past { var, body }),
            (var(), body.clone()).prop_map(|(var, body)| F::Perf { var, body }),
            (var(), body.clone()).prop_map(|(var, body)| F::NtenseVar { var, body }),
            (term(), body.clone()).prop_map(|(anchor, body)| F::At { anchor, body }),
            (term(), body.clone()).prop_map(|(anchor, body)| F::Before { anchor, body }),
            (term(), body.clone()).prop_map(|(anchor, body)| F::After { anchor, body }),
            (part_name(), 1..=4u32, body).prop_map(|(part, qty, body)| F::For { part, qty, body }),
        ]
    })
}

fn period_and_point() -> (BoxedStrategy<PeriodExpr>, BoxedStrategy<PointExpr>) {
    let point_leaf = prop_oneof![Just(PointExpr::Beg), Just(PointExpr::Now), Just(PointExpr::End)].boxed();
    let period_leaf = term().prop_map(PeriodExpr::Ref).boxed();
    // Both recursions bottom out in leaves of the other kind, so two levels of
    // mutual nesting are built by hand.
    let point1 = point_leaf.clone().prop_recursive(2, 4, 1, |p| p.prop_map(PointExpr::succ)).boxed();
    let interval = |pt: BoxedStrategy<PointExpr>| {
        (pt.clone(), pt, any::<bool>(), any::<bool>()).prop_map(|(lo, hi, a, b)| PeriodExpr::interval(lo, hi, a, b))
    };
    let period1 = prop_oneof![2 => period_leaf.clone(), 3 => interval(point1.clone())].boxed();
    let point2 = prop_oneof![
        3 => point1.clone(),
        1 => period1.clone().prop_map(PointExpr::earliest),
        1 => period1.clone().prop_map(PointExpr::latest),
        1 => period1.clone().prop_map(|p| PointExpr::succ(PointExpr::earliest(p))),
    ]
    .boxed();
    let period2 = prop_oneof![2 => period1.clone(), 3 => interval(point2.clone())]
        .prop_recursive(2, 6, 2, |p| (p.clone(), p).prop_map(|(a, b)| PeriodExpr::intersect(a, b)))
        .boxed();
    (period2, point2)
}

fn bot_term() -> impl Strategy<Value = BotTerm> {
    let (period, point) = period_and_point();
    prop_oneof![
        3 => constant().prop_map(BotTerm::Const),
        3 => var().prop_map(BotTerm::Var),
        2 => period.prop_map(BotTerm::from),
        1 => point.prop_map(BotTerm::Point),
    ]
}

pub fn bot_formula() -> impl Strategy<Value = bot::Formula> {
    use bot::Formula as F;
    let (period, point) = period_and_point();
    let leaf = prop_oneof![
        4 => functor().prop_flat_map(|(f, n)| {
            prop::collection::vec(bot_term(), n).prop_map(move |args| F::lit(f.clone(), args))
        }),
        2 => (period.clone(), period).prop_map(|(a, b)| F::Subper(a, b)),
        2 => (bot_term(), bot_term()).prop_map(|(a, b)| F::Eq(a, b)),
        1 => bot_term().prop_map(F::Period),
        1 => (part_name(), bot_term()).prop_map(|(part, term)| F::Part { part, term }),
        1 => (point.clone(), point).prop_map(|(a, b)| F::Prec(a, b)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| F::and(l, r)))
}

/// `n` values drawn from `s` with a fixed RNG seed.
pub fn sample<S: Strategy>(s: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n).map(|_| s.new_tree(&mut runner).expect("strategy generates").current()).collect()
}
