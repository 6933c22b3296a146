//! Differential testing of the translation: TOP denotations against BOT
//! denotations of translated formulas on random small models.

mod gen;
mod shrink;

use std::fmt;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use gen::{gen_formula, gen_model, gen_speech};
pub use shrink::shrink;

use crate::bot::{self, denot_bot_witness};
use crate::model::{derive_bot_model, Assignment, DeriveError, EtaMapping, EvalError, TopModel};
use crate::model_file::serialize;
use crate::time::{Period, Point};
use crate::top::{self, denot_top_witness};
use crate::translate::{Mutation, TransContext, TransError};

/// Size bounds for generated cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub timeline_size: usize,
    pub atom_count: usize,
    pub pred_count: usize,
    pub max_arity: usize,
    pub max_depth: usize,
    pub max_periods: usize,
    pub max_vars: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            timeline_size: 8,
            atom_count: 3,
            pred_count: 3,
            max_arity: 2,
            max_depth: 4,
            max_periods: 2,
            max_vars: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{name} must be between {min} and {max}, got {value}")]
pub struct ParamError {
    pub name: &'static str,
    pub value: usize,
    pub min: usize,
    pub max: usize,
}

impl GenParams {
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn check(&self) -> Result<(), ParamError> {
        let bounds = [
            ("timeline size", self.timeline_size, 2, 10),
            ("atom count", self.atom_count, 1, 4),
            ("predicate count", self.pred_count, 1, 3),
            ("max arity", self.max_arity, 1, 2),
            ("max depth", self.max_depth, 1, 4),
            ("periods per tuple", self.max_periods, 1, 2),
            ("variable count", self.max_vars, 1, 3),
        ];
        for (name, value, min, max) in bounds {
            if !(min..=max).contains(&value) {
                return Err(ParamError { name, value, min, max });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Translate(#[from] TransError),
    #[error(transparent)]
    Derive(#[from] DeriveError),
}

/// Outcome of comparing both denotations of one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub agree: bool,
    pub top: bool,
    pub bot: bool,
    pub translation: bot::Formula,
    pub top_witness: Option<(Assignment, Period)>,
    pub bot_witness: Option<Assignment>,
}

/// `denot_top(m, st, f)` against the BOT denotation of `translate(f)` over
/// the derived model.
pub fn check_equivalence(
    m: &TopModel,
    st: Point,
    f: &top::Formula,
    mutation: Option<Mutation>,
) -> Result<Verdict, CheckError> {
    let eta = EtaMapping::default();
    let bm = derive_bot_model(m, &eta)?;
    let mut ctx = TransContext::new(eta).with_mutation(mutation);
    ctx.reserve_model(m);
    let translation = ctx.translate(f)?;
    let top_witness = denot_top_witness(m, st, f)?;
    let bot_witness = denot_bot_witness(&bm, st, &translation)?;
    let (top, bot) = (top_witness.is_some(), bot_witness.is_some());
    Ok(Verdict { agree: top == bot, top, bot, translation, top_witness, bot_witness })
}

/// One generated (model, st, formula) triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub index: u64,
    pub model: TopModel,
    pub st: Point,
    pub formula: top::Formula,
}

/// The seed for case `index` of a campaign seeded with `seed`.
pub fn case_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

pub fn gen_case(params: &GenParams, index: u64) -> Case {
    let p = params.with_seed(case_seed(params.seed, index));
    let model = gen_model(&p);
    let st = gen_speech(&p, model.timeline());
    let formula = gen_formula(&p, &model);
    Case { index, model, st, formula }
}

/// Hex prefix of the SHA-256 of the serialized model.
pub fn model_digest(m: &TopModel, st: Point) -> String {
    let digest = Sha256::digest(serialize(m, st).as_bytes());
    hex::encode(digest)[..16].to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub case: Case,
    pub verdict: Verdict,
    /// A smaller case that still disagrees.
    pub shrunk: Case,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub cases: u64,
    pub disagreements: Vec<Disagreement>,
    /// Cases that could not be evaluated at all; generated cases never should be.
    pub errors: Vec<(u64, CheckError)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.errors.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.disagreements {
            writeln!(
                f,
                "disagreement seed={} case={} st={} top={} bot={} formula=\"{}\" model={} shrunk_st={} shrunk_formula=\"{}\" shrunk_model={}",
                self.seed,
                d.case.index,
                d.case.st,
                d.verdict.top,
                d.verdict.bot,
                d.case.formula,
                model_digest(&d.case.model, d.case.st),
                d.shrunk.st,
                d.shrunk.formula,
                model_digest(&d.shrunk.model, d.shrunk.st),
            )?;
        }
        for (index, e) in &self.errors {
            writeln!(f, "error seed={} case={index}: {e}", self.seed)?;
        }
        write!(f, "cases={} disagreements={}", self.cases, self.disagreements.len())
    }
}

/// Runs `cases` generated cases in parallel; the report does not depend on
/// scheduling.
pub fn run_campaign(params: &GenParams, cases: u64, mutation: Option<Mutation>) -> Report {
    let outcomes: Vec<(Case, Result<Verdict, CheckError>)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let case = gen_case(params, i);
            let verdict = check_equivalence(&case.model, case.st, &case.formula, mutation);
            (case, verdict)
        })
        .collect();
    let mut report = Report { seed: params.seed, cases, disagreements: Vec::new(), errors: Vec::new() };
    for (case, verdict) in outcomes {
        match verdict {
            Ok(v) if v.agree => {}
            Ok(verdict) => {
                let shrunk = shrink(&case, mutation);
                report.disagreements.push(Disagreement { case, verdict, shrunk });
            }
            Err(e) => report.errors.push((case.index, e)),
        }
    }
    report
}
