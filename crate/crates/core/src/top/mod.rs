//! TOP: the operator-based temporal meaning representation.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::{check_refs, denot_top, denot_top_witness, eval_top_at, EvalIndex};
pub use parse::parse_top;

pub use crate::syntax::Term;

/// `π(τ₁, …, τₙ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub functor: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(functor: impl Into<String>, args: Vec<Term>) -> Self {
        Self { functor: functor.into(), args }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.functor)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Literal(Literal),
    And(Box<Formula>, Box<Formula>),
    /// `Part[σ, β]`
    Part { part: String, var: String },
    Pres(Box<Formula>),
    Past { var: String, body: Box<Formula> },
    Perf { var: String, body: Box<Formula> },
    Culm(Literal),
    At { anchor: Term, body: Box<Formula> },
    Before { anchor: Term, body: Box<Formula> },
    After { anchor: Term, body: Box<Formula> },
    Fills(Box<Formula>),
    NtenseVar { var: String, body: Box<Formula> },
    NtenseNow(Box<Formula>),
    /// `For[σc, qty, φ]` with `qty ≥ 1`.
    For { part: String, qty: u32, body: Box<Formula> },
}

impl Formula {
    pub fn lit(functor: &str, args: Vec<Term>) -> Self {
        Formula::Literal(Literal::new(functor, args))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn past(var: &str, body: Formula) -> Self {
        Formula::Past { var: var.into(), body: Box::new(body) }
    }

    pub fn perf(var: &str, body: Formula) -> Self {
        Formula::Perf { var: var.into(), body: Box::new(body) }
    }

    pub fn at(anchor: Term, body: Formula) -> Self {
        Formula::At { anchor, body: Box::new(body) }
    }

    /// The single sub-formula of a unary operator.
    pub fn body(&self) -> Option<&Formula> {
        match self {
            Formula::Pres(b) | Formula::Fills(b) | Formula::NtenseNow(b) => Some(b),
            Formula::Past { body, .. }
            | Formula::Perf { body, .. }
            | Formula::At { body, .. }
            | Formula::Before { body, .. }
            | Formula::After { body, .. }
            | Formula::NtenseVar { body, .. }
            | Formula::For { body, .. } => Some(body),
            Formula::Literal(_) | Formula::And(..) | Formula::Part { .. } | Formula::Culm(_) => None,
        }
    }

    /// Nesting depth; literals and `Part` atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Literal(_) | Formula::Part { .. } => 1,
            Formula::Culm(_) => 2,
            Formula::And(l, r) => 1 + l.depth().max(r.depth()),
            other => 1 + other.body().map_or(0, Formula::depth),
        }
    }

    /// Every variable of the formula. TOP has no binders, so all are free.
    pub fn free_vars(&self) -> BTreeSet<String> {
        self.vars_in_order().into_iter().collect()
    }

    /// Variables in order of first occurrence.
    pub fn vars_in_order(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if !out.iter().any(|o: &String| o == v) {
                out.push(v.to_string());
            }
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        fn term(t: &Term, f: &mut impl FnMut(&str)) {
            if let Term::Var(v) = t {
                f(v)
            }
        }
        match self {
            Formula::Literal(l) | Formula::Culm(l) => l.args.iter().for_each(|t| term(t, f)),
            Formula::And(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
            Formula::Part { var, .. } => f(var),
            Formula::Past { var, body } | Formula::Perf { var, body } | Formula::NtenseVar { var, body } => {
                f(var);
                body.visit_vars(f);
            }
            Formula::At { anchor, body } | Formula::Before { anchor, body } | Formula::After { anchor, body } => {
                term(anchor, f);
                body.visit_vars(f);
            }
            Formula::Pres(b) | Formula::Fills(b) | Formula::NtenseNow(b) | Formula::For { body: b, .. } => {
                b.visit_vars(f)
            }
        }
    }

    /// The formula with every variable renamed by `rename`.
    pub fn map_vars(&self, rename: &mut impl FnMut(&str) -> String) -> Formula {
        fn term(t: &Term, rename: &mut impl FnMut(&str) -> String) -> Term {
            match t {
                Term::Var(v) => Term::Var(rename(v)),
                c => c.clone(),
            }
        }
        let lit = |l: &Literal, rename: &mut _| Literal::new(l.functor.clone(), l.args.iter().map(|t| term(t, rename)).collect());
        let body = |b: &Formula, rename: &mut _| Box::new(b.map_vars(rename));
        match self {
            Formula::Literal(l) => Formula::Literal(lit(l, rename)),
            Formula::Culm(l) => Formula::Culm(lit(l, rename)),
            Formula::And(l, r) => Formula::And(body(l, rename), body(r, rename)),
            Formula::Part { part, var } => Formula::Part { part: part.clone(), var: rename(var) },
            Formula::Past { var, body: b } => Formula::Past { var: rename(var), body: body(b, rename) },
            Formula::Perf { var, body: b } => Formula::Perf { var: rename(var), body: body(b, rename) },
            Formula::NtenseVar { var, body: b } => Formula::NtenseVar { var: rename(var), body: body(b, rename) },
            Formula::At { anchor, body: b } => Formula::At { anchor: term(anchor, rename), body: body(b, rename) },
            Formula::Before { anchor, body: b } => Formula::Before { anchor: term(anchor, rename), body: body(b, rename) },
            Formula::After { anchor, body: b } => Formula::After { anchor: term(anchor, rename), body: body(b, rename) },
            Formula::Pres(b) => Formula::Pres(body(b, rename)),
            Formula::Fills(b) => Formula::Fills(body(b, rename)),
            Formula::NtenseNow(b) => Formula::NtenseNow(body(b, rename)),
            Formula::For { part, qty, body: b } => Formula::For { part: part.clone(), qty: *qty, body: body(b, rename) },
        }
    }

    /// Predicate functors with the arities they are used with.
    pub fn functors(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Literal(l) | Formula::Culm(l) = f {
                out.insert((l.functor.clone(), l.args.len()));
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::And(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            other => {
                if let Some(b) = other.body() {
                    b.visit(f)
                }
            }
        }
    }

    /// The conjuncts of a (possibly nested) conjunction, left to right.
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
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Literal(l) => l.fmt(f),
            Formula::And(l, r) => {
                if matches!(**l, Formula::And(..)) {
                    write!(f, "({l}) & {r}")
                } else {
                    write!(f, "{l} & {r}")
                }
            }
            Formula::Part { part, var } => write!(f, "Part[{part}, ?{var}]"),
            Formula::Pres(b) => write!(f, "Pres[{b}]"),
            Formula::Past { var, body } => write!(f, "Past[?{var}, {body}]"),
            Formula::Perf { var, body } => write!(f, "Perf[?{var}, {body}]"),
            Formula::Culm(l) => write!(f, "Culm[{l}]"),
            Formula::At { anchor, body } => write!(f, "At[{anchor}, {body}]"),
            Formula::Before { anchor, body } => write!(f, "Before[{anchor}, {body}]"),
            Formula::After { anchor, body } => write!(f, "After[{anchor}, {body}]"),
            Formula::Fills(b) => write!(f, "Fills[{b}]"),
            Formula::NtenseVar { var, body } => write!(f, "Ntense[?{var}, {body}]"),
            Formula::NtenseNow(b) => write!(f, "Ntense[now, {b}]"),
            Formula::For { part, qty, body } => write!(f, "For[{part}, {qty}, {body}]"),
        }
    }
}

/// Canonical concrete syntax.
pub fn print_top(f: &Formula) -> String {
    f.to_string()
}
