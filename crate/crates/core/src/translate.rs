//! TOP to BOT translation.
//!
//! `trans(φ, ε, λ)` rewrites `φ` given a BOT term `ε` standing for TOP's event
//! time and a BOT period expression `λ` standing for its localisation time.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::bot::{self, BotTerm, PeriodExpr, PointExpr};
use crate::model::{EtaMapping, TopModel};
use crate::syntax::Term;
use crate::top;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransError {
    #[error("functor `{image}` (image of `{functor}`) is already in use")]
    EtaCollision { functor: String, image: String },
}

/// Deliberate rule defects, used to check that the equivalence harness notices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Past keeps `λ` instead of narrowing it with `[beg, now)`.
    DropPastNarrowing,
}

/// Fresh-name and η state for one translation.
#[derive(Debug, Clone)]
pub struct TransContext {
    eta: EtaMapping,
    used: BTreeSet<String>,
    counter: usize,
    mutation: Option<Mutation>,
}

impl TransContext {
    pub fn new(eta: EtaMapping) -> Self {
        Self { eta, used: BTreeSet::new(), counter: 0, mutation: None }
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> Self {
        self.mutation = mutation;
        self
    }

    /// Marks `names` as taken, for fresh variables and η images alike.
    pub fn reserve<I: IntoIterator<Item = S>, S: Into<String>>(&mut self, names: I) {
        self.used.extend(names.into_iter().map(Into::into));
    }

    /// Reserves every functor, constant and partitioning name of `m`.
    pub fn reserve_model(&mut self, m: &TopModel) {
        self.reserve(m.preds.keys().map(|f| f.name.clone()));
        self.reserve(m.frame.consts.keys().cloned());
        self.reserve(m.frame.cparts.keys().cloned());
        self.reserve(m.frame.gparts.keys().cloned());
    }

    fn reserve_formula(&mut self, f: &top::Formula) {
        self.reserve(f.vars_in_order());
        self.reserve(f.functors().into_iter().map(|(name, _)| name));
    }

    /// `(η₁(π), η₂(π))`.
    pub fn eta(&self, functor: &str) -> Result<(String, String), TransError> {
        let images = (self.eta.culminated(functor), self.eta.span(functor));
        for image in [&images.0, &images.1] {
            if self.used.contains(image) {
                return Err(TransError::EtaCollision { functor: functor.to_string(), image: image.clone() });
            }
        }
        Ok(images)
    }

    /// A variable name not used before, `_<prefix><n>`.
    pub fn fresh(&mut self, prefix: &str) -> String {
        loop {
            let name = format!("_{prefix}{}", self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    /// `trans(φ, ε, λ)`.
    pub fn trans(&mut self, f: &top::Formula, eps: &PeriodExpr, lam: &PeriodExpr) -> Result<bot::Formula, TransError> {
        use bot::Formula as B;
        use top::Formula as T;
        let term = |t: &Term| PeriodExpr::Ref(t.clone());
        let out = match f {
            T::Literal(l) => {
                let beta = PeriodExpr::var(self.fresh("p"));
                let mut args: Vec<BotTerm> = l.args.iter().cloned().map(BotTerm::from).collect();
                args.push(beta.clone().into());
                conj([
                    B::Subper(eps.clone(), lam.clone()),
                    B::lit(&l.functor, args),
                    B::Subper(eps.clone(), beta),
                ])
            }
            T::And(l, r) => {
                let l = self.trans(l, eps, lam)?;
                conj([l, self.trans(r, eps, lam)?])
            }
            T::Part { part, var } => B::Part { part: part.clone(), term: BotTerm::var(var) },
            T::Pres(body) => conj([B::Subper(PeriodExpr::now(), eps.clone()), self.trans(body, eps, lam)?]),
            T::Past { var, body } => {
                let lam = match self.mutation {
                    Some(Mutation::DropPastNarrowing) => lam.clone(),
                    None => PeriodExpr::intersect(
                        lam.clone(),
                        PeriodExpr::interval(PointExpr::Beg, PointExpr::Now, true, false),
                    ),
                };
                conj([B::Eq(BotTerm::var(var), eps.clone().into()), self.trans(body, eps, &lam)?])
            }
            T::Culm(l) => {
                let (cmp, max) = self.eta(&l.functor)?;
                let args: Vec<BotTerm> = l.args.iter().cloned().map(BotTerm::from).collect();
                let mut span_args = args.clone();
                span_args.push(eps.clone().into());
                conj([B::Subper(eps.clone(), lam.clone()), B::lit(cmp, args), B::lit(max, span_args)])
            }
            T::At { anchor, body } => {
                let lam = PeriodExpr::intersect(lam.clone(), term(anchor));
                conj([B::Period(anchor.clone().into()), self.trans(body, eps, &lam)?])
            }
            T::Before { anchor, body } => {
                let bound = PeriodExpr::interval(PointExpr::Beg, PointExpr::earliest(term(anchor)), true, false);
                let lam = PeriodExpr::intersect(lam.clone(), bound);
                conj([B::Period(anchor.clone().into()), self.trans(body, eps, &lam)?])
            }
            T::After { anchor, body } => {
                let bound = PeriodExpr::interval(PointExpr::latest(term(anchor)), PointExpr::End, false, true);
                let lam = PeriodExpr::intersect(lam.clone(), bound);
                conj([B::Period(anchor.clone().into()), self.trans(body, eps, &lam)?])
            }
            T::Fills(body) => conj([B::Eq(eps.clone().into(), lam.clone().into()), self.trans(body, eps, lam)?]),
            T::NtenseVar { var, body } => conj([
                B::Period(BotTerm::var(var)),
                self.trans(body, &PeriodExpr::var(var), &PeriodExpr::whole())?,
            ]),
            T::NtenseNow(body) => self.trans(body, &PeriodExpr::now(), &PeriodExpr::whole())?,
            T::For { part, qty, body } => {
                let betas: Vec<PeriodExpr> = (0..*qty).map(|_| PeriodExpr::var(self.fresh("b"))).collect();
                let mut parts: Vec<B> =
                    betas.iter().map(|b| B::Part { part: part.clone(), term: b.clone().into() }).collect();
                let point = |x: PointExpr| BotTerm::Point(x);
                let first = betas.first().expect("qty is at least 1");
                let last = betas.last().expect("qty is at least 1");
                parts.push(B::Eq(
                    point(PointExpr::earliest(first.clone())),
                    point(PointExpr::earliest(eps.clone())),
                ));
                for pair in betas.windows(2) {
                    parts.push(B::Eq(
                        point(PointExpr::succ(PointExpr::latest(pair[0].clone()))),
                        point(PointExpr::earliest(pair[1].clone())),
                    ));
                }
                parts.push(B::Eq(point(PointExpr::latest(last.clone())), point(PointExpr::latest(eps.clone()))));
                parts.push(self.trans(body, eps, lam)?);
                conj(parts)
            }
            T::Perf { var, body } => {
                let beta = PeriodExpr::var(var);
                conj([
                    B::Subper(eps.clone(), lam.clone()),
                    B::Period(BotTerm::var(var)),
                    B::Prec(PointExpr::latest(beta.clone()), PointExpr::earliest(eps.clone())),
                    self.trans(body, &beta, &PeriodExpr::whole())?,
                ])
            }
        };
        Ok(out)
    }

    /// `trans(φ, ε₀, [beg, end])` with `ε₀` a fresh variable.
    pub fn translate(&mut self, f: &top::Formula) -> Result<bot::Formula, TransError> {
        self.reserve_formula(f);
        let eps = PeriodExpr::var(self.fresh("et"));
        self.trans(f, &eps, &PeriodExpr::whole())
    }
}

fn conj(parts: impl IntoIterator<Item = bot::Formula>) -> bot::Formula {
    bot::Formula::conj(parts).expect("every rule emits at least one conjunct")
}

/// Translates `f` with the default η mapping.
pub fn translate(f: &top::Formula) -> Result<bot::Formula, TransError> {
    TransContext::new(EtaMapping::default()).translate(f)
}

/// True iff `a` and `b` differ only by a bijective renaming of variables
/// outside `fixed`.
pub fn alpha_equivalent(a: &bot::Formula, b: &bot::Formula, fixed: &BTreeSet<String>) -> bool {
    canonical(a, fixed) == canonical(b, fixed)
}

fn canonical(f: &bot::Formula, fixed: &BTreeSet<String>) -> bot::Formula {
    let mut names: BTreeMap<String, String> = BTreeMap::new();
    f.map_vars(&mut |v| {
        if fixed.contains(v) {
            return v.to_string();
        }
        let n = names.len();
        // `#` cannot start an identifier, so canonical names never clash with fixed ones.
        names.entry(v.to_string()).or_insert_with(|| format!("#{n}")).clone()
    })
}
