//! Interpretation structures shared by TOP and BOT.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::time::{Period, Point, Timeline};

/// An element of OBJS: a named atom or a period over the timeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj {
    /// Index into [`ObjectDomain::atoms`].
    Atom(usize),
    Period(Period),
}

impl Obj {
    pub fn as_period(&self) -> Option<Period> {
        match self {
            Obj::Period(p) => Some(*p),
            Obj::Atom(_) => None,
        }
    }
}

/// The atoms of OBJS. Periods are implicitly members too.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ObjectDomain {
    pub atoms: Vec<String>,
}

impl ObjectDomain {
    pub fn new(atoms: Vec<String>) -> Self {
        Self { atoms }
    }

    pub fn atom(&self, name: &str) -> Option<Obj> {
        self.atoms.iter().position(|a| a == name).map(Obj::Atom)
    }

    pub fn len(&self, timeline: &Timeline) -> usize {
        self.atoms.len() + timeline.period_count()
    }

    /// OBJS in enumeration order: atoms in declaration order, then periods by `(lo, hi)`.
    pub fn objects<'a>(&'a self, timeline: &Timeline) -> impl Iterator<Item = Obj> + 'a {
        (0..self.atoms.len())
            .map(Obj::Atom)
            .chain(timeline.periods().map(Obj::Period))
    }

    pub fn display<'a>(&'a self, obj: &'a Obj) -> impl fmt::Display + 'a {
        DisplayObj { domain: self, obj }
    }
}

struct DisplayObj<'a> {
    domain: &'a ObjectDomain,
    obj: &'a Obj,
}

impl fmt::Display for DisplayObj<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.obj {
            Obj::Atom(i) => match self.domain.atoms.get(*i) {
                Some(name) => f.write_str(name),
                None => write!(f, "#atom{i}"),
            },
            Obj::Period(p) => p.fmt(f),
        }
    }
}

/// A predicate symbol together with the arity it is used with.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Functor {
    pub name: String,
    pub arity: usize,
}

impl Functor {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self { name: name.into(), arity }
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartKind {
    Complete,
    Gappy,
}

/// A set of pairwise disjoint periods, sorted by start point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partitioning {
    pub kind: PartKind,
    pub blocks: Vec<Period>,
}

impl Partitioning {
    pub fn complete(blocks: Vec<Period>) -> Self {
        Self { kind: PartKind::Complete, blocks }
    }

    pub fn gappy(blocks: Vec<Period>) -> Self {
        Self { kind: PartKind::Gappy, blocks }
    }

    /// Consecutive blocks of length `len` covering the timeline; the last one
    /// may be shorter.
    pub fn uniform(timeline: &Timeline, len: usize) -> Self {
        let len = len.max(1);
        let blocks = (0..timeline.size())
            .step_by(len)
            .map(|lo| Period::new(lo, (lo + len - 1).min(timeline.last())).unwrap())
            .collect();
        Self::complete(blocks)
    }

    pub fn contains(&self, p: &Period) -> bool {
        self.blocks.binary_search(p).is_ok()
    }

    /// The block whose earliest point is `t`.
    pub fn block_starting_at(&self, t: Point) -> Option<Period> {
        self.blocks
            .binary_search_by_key(&t, |b| b.lo())
            .ok()
            .map(|i| self.blocks[i])
    }
}

/// The components TOP and BOT models have in common: the point structure,
/// OBJS, constants and partitionings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub timeline: Timeline,
    pub domain: ObjectDomain,
    pub consts: BTreeMap<String, Obj>,
    pub cparts: BTreeMap<String, Partitioning>,
    pub gparts: BTreeMap<String, Partitioning>,
}

impl Frame {
    pub fn new(timeline: Timeline) -> Self {
        Self {
            timeline,
            domain: ObjectDomain::default(),
            consts: BTreeMap::new(),
            cparts: BTreeMap::new(),
            gparts: BTreeMap::new(),
        }
    }

    /// Declares an atom and a constant of the same name denoting it.
    pub fn add_atom(&mut self, name: &str) -> Obj {
        let obj = match self.domain.atom(name) {
            Some(obj) => obj,
            None => {
                self.domain.atoms.push(name.to_string());
                Obj::Atom(self.domain.atoms.len() - 1)
            }
        };
        self.consts.insert(name.to_string(), obj);
        obj
    }

    pub fn partitioning(&self, name: &str) -> Option<&Partitioning> {
        self.cparts.get(name).or_else(|| self.gparts.get(name))
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> + '_ {
        self.domain.objects(&self.timeline)
    }

    pub fn show(&self, obj: &Obj) -> String {
        self.domain.display(obj).to_string()
    }
}

/// A TOP model. Predicate extensions list the maximal periods where each
/// situation holds; `culms` lists the argument tuples whose situation reaches
/// its climax (all other tuples do not).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopModel {
    pub frame: Frame,
    pub preds: BTreeMap<Functor, BTreeMap<Vec<Obj>, BTreeSet<Period>>>,
    pub culms: BTreeMap<Functor, BTreeSet<Vec<Obj>>>,
}

impl TopModel {
    pub fn new(timeline: Timeline) -> Self {
        Self { frame: Frame::new(timeline), preds: BTreeMap::new(), culms: BTreeMap::new() }
    }

    pub fn timeline(&self) -> &Timeline {
        &self.frame.timeline
    }

    pub fn declare_pred(&mut self, name: &str, arity: usize) -> Functor {
        let functor = Functor::new(name, arity);
        self.preds.entry(functor.clone()).or_default();
        functor
    }

    pub fn add_maximal(&mut self, functor: &Functor, args: Vec<Obj>, period: Period) {
        self.preds
            .entry(functor.clone())
            .or_default()
            .entry(args)
            .or_default()
            .insert(period);
    }

    pub fn set_culm(&mut self, functor: &Functor, args: Vec<Obj>) {
        self.culms.entry(functor.clone()).or_default().insert(args);
    }

    /// `f_pfuns(π)(args)`; empty for unlisted tuples.
    pub fn extension(&self, functor: &Functor, args: &[Obj]) -> Option<&BTreeSet<Period>> {
        self.preds.get(functor).and_then(|ext| ext.get(args))
    }

    pub fn culminates(&self, functor: &Functor, args: &[Obj]) -> bool {
        self.culms.get(functor).is_some_and(|set| set.contains(args))
    }
}

/// A BOT model: predicates denote plain truth values over OBJS tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BotModel {
    pub frame: Frame,
    /// For each functor, the tuples it is true of; all others are false.
    pub preds: BTreeMap<Functor, BTreeSet<Vec<Obj>>>,
}

impl BotModel {
    pub fn timeline(&self) -> &Timeline {
        &self.frame.timeline
    }

    pub fn holds(&self, functor: &Functor, args: &[Obj]) -> bool {
        self.preds.get(functor).is_some_and(|set| set.contains(args))
    }
}

/// A variable assignment `g`.
pub type Assignment = BTreeMap<String, Obj>;

/// Read access to a (possibly partial) variable assignment.
pub trait Env {
    fn lookup(&self, var: &str) -> Option<Obj>;
}

impl Env for Assignment {
    fn lookup(&self, var: &str) -> Option<Obj> {
        self.get(var).copied()
    }
}

/// A partial assignment over a fixed variable list, used by the brute-force
/// searches.
#[derive(Debug, Clone)]
pub(crate) struct Slots<'a> {
    pub names: &'a [String],
    pub values: Vec<Option<Obj>>,
}

impl<'a> Slots<'a> {
    pub fn new(names: &'a [String]) -> Self {
        Self { names, values: vec![None; names.len()] }
    }

    pub fn to_assignment(&self, fill: Obj) -> Assignment {
        self.names
            .iter()
            .zip(&self.values)
            .map(|(n, v)| (n.clone(), v.unwrap_or(fill)))
            .collect()
    }
}

impl Env for Slots<'_> {
    fn lookup(&self, var: &str) -> Option<Obj> {
        self.names.iter().position(|n| n == var).and_then(|i| self.values[i])
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `?{0}` is not bound")]
    UnboundVariable(String),
    #[error("unknown predicate functor {0}")]
    UnknownFunctor(Functor),
    #[error("unknown partitioning `{0}`")]
    UnknownPartitioning(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
}

/// The η₁/η₂ functor renamings used for culmination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaMapping {
    pub culminated_prefix: String,
    pub span_prefix: String,
}

impl Default for EtaMapping {
    fn default() -> Self {
        Self { culminated_prefix: "cmp_".into(), span_prefix: "max_".into() }
    }
}

impl EtaMapping {
    /// η₁(π): true of a tuple whose situation reached its climax.
    pub fn culminated(&self, functor: &str) -> String {
        format!("{}{}", self.culminated_prefix, functor)
    }

    /// η₂(π): relates a tuple to the period from its first start to its last stop.
    pub fn span(&self, functor: &str) -> String {
        format!("{}{}", self.span_prefix, functor)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeriveError {
    #[error("eta image `{image}` of `{functor}` is already a functor of the model")]
    FunctorCollision { functor: String, image: String },
}

/// Builds the BOT model a translated formula is evaluated against.
///
/// For every TOP predicate `π/n` the result holds `π/n+1` (tuple plus one of
/// its maximal periods), `η₁(π)/n` (culmination flag) and `η₂(π)/n+1` (tuple
/// plus `[minpt(S), maxpt(S)]` where `S` is the union of its maximal periods).
pub fn derive_bot_model(m: &TopModel, eta: &EtaMapping) -> Result<BotModel, DeriveError> {
    let names: BTreeSet<&str> = m
        .preds
        .keys()
        .chain(m.culms.keys())
        .map(|f| f.name.as_str())
        .collect();
    for f in &names {
        for image in [eta.culminated(f), eta.span(f)] {
            if names.contains(image.as_str()) {
                return Err(DeriveError::FunctorCollision { functor: f.to_string(), image });
            }
        }
    }

    let mut preds: BTreeMap<Functor, BTreeSet<Vec<Obj>>> = BTreeMap::new();
    for (functor, ext) in &m.preds {
        let n = functor.arity;
        let mut with_period = BTreeSet::new();
        let mut span = BTreeSet::new();
        for (args, periods) in ext {
            for p in periods {
                let mut tuple = args.clone();
                tuple.push(Obj::Period(*p));
                with_period.insert(tuple);
            }
            if let (Some(first), Some(last)) = (periods.iter().map(|p| p.lo()).min(), periods.iter().map(|p| p.hi()).max()) {
                let mut tuple = args.clone();
                tuple.push(Obj::Period(Period::new(first, last).expect("min ≤ max")));
                span.insert(tuple);
            }
        }
        preds.insert(Functor::new(functor.name.clone(), n + 1), with_period);
        preds.insert(Functor::new(eta.span(&functor.name), n + 1), span);
        let culminated = m.culms.get(functor).cloned().unwrap_or_default();
        preds.insert(Functor::new(eta.culminated(&functor.name), n), culminated);
    }
    Ok(BotModel { frame: m.frame.clone(), preds })
}

/// A broken TOP model invariant, with its location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MergeablePeriods { functor: Functor, args: Vec<Obj>, first: Period, second: Period },
    PeriodOffTimeline { location: String, period: Period },
    UnknownAtom { location: String, index: usize },
    TupleArity { functor: Functor, found: usize },
    ConflictingArity { name: String },
    UndeclaredCulm { functor: Functor },
    DuplicateAtom { name: String },
    OverlappingBlocks { name: String, first: Period, second: Period },
    IncompletePartitioning { name: String, missing: Point },
    CoveringGappyPartitioning { name: String },
    WrongPartitionKind { name: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MergeablePeriods { functor, args, first, second } => write!(
                f,
                "{functor} tuple {args:?}: maximal periods {first} and {second} have a convex union"
            ),
            Violation::PeriodOffTimeline { location, period } => {
                write!(f, "{location}: period {period} is not on the timeline")
            }
            Violation::UnknownAtom { location, index } => write!(f, "{location}: unknown atom #{index}"),
            Violation::TupleArity { functor, found } => {
                write!(f, "{functor}: tuple of length {found}")
            }
            Violation::ConflictingArity { name } => {
                write!(f, "predicate `{name}` is declared with more than one arity")
            }
            Violation::UndeclaredCulm { functor } => {
                write!(f, "culmination flags for undeclared predicate {functor}")
            }
            Violation::DuplicateAtom { name } => write!(f, "atom `{name}` declared twice"),
            Violation::OverlappingBlocks { name, first, second } => {
                write!(f, "partitioning `{name}`: blocks {first} and {second} overlap or are out of order")
            }
            Violation::IncompletePartitioning { name, missing } => {
                write!(f, "complete partitioning `{name}` does not cover point {missing}")
            }
            Violation::CoveringGappyPartitioning { name } => {
                write!(f, "gappy partitioning `{name}` covers the whole timeline")
            }
            Violation::WrongPartitionKind { name } => {
                write!(f, "partitioning `{name}` is filed under the wrong kind")
            }
        }
    }
}

/// Checks every TOP model invariant; an empty result means the model is valid.
pub fn validate_model(m: &TopModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let frame = &m.frame;
    let tl = frame.timeline;

    let mut seen = BTreeSet::new();
    for a in &frame.domain.atoms {
        if !seen.insert(a) {
            out.push(Violation::DuplicateAtom { name: a.clone() });
        }
    }

    let check_obj = |out: &mut Vec<Violation>, location: String, obj: &Obj| match obj {
        Obj::Atom(i) if *i >= frame.domain.atoms.len() => {
            out.push(Violation::UnknownAtom { location, index: *i })
        }
        Obj::Period(p) if !tl.contains_period(*p) => {
            out.push(Violation::PeriodOffTimeline { location, period: *p })
        }
        _ => {}
    };

    for (name, obj) in &frame.consts {
        check_obj(&mut out, format!("constant {name}"), obj);
    }

    let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
    for functor in m.preds.keys() {
        if let Some(&a) = arities.get(functor.name.as_str()) {
            if a != functor.arity {
                out.push(Violation::ConflictingArity { name: functor.name.clone() });
            }
        }
        arities.insert(&functor.name, functor.arity);
    }

    for (functor, ext) in &m.preds {
        for (args, periods) in ext {
            if args.len() != functor.arity {
                out.push(Violation::TupleArity { functor: functor.clone(), found: args.len() });
            }
            for obj in args {
                check_obj(&mut out, format!("{functor} argument"), obj);
            }
            for p in periods {
                if !tl.contains_period(*p) {
                    out.push(Violation::PeriodOffTimeline { location: format!("{functor}"), period: *p });
                }
            }
            // sorted by (lo, hi), so only neighbours can merge
            let sorted: Vec<&Period> = periods.iter().collect();
            for w in sorted.windows(2) {
                if w[0].union_is_convex(w[1]) {
                    out.push(Violation::MergeablePeriods {
                        functor: functor.clone(),
                        args: args.clone(),
                        first: *w[0],
                        second: *w[1],
                    });
                }
            }
        }
    }

    for (functor, tuples) in &m.culms {
        if !m.preds.contains_key(functor) {
            out.push(Violation::UndeclaredCulm { functor: functor.clone() });
        }
        for args in tuples {
            if args.len() != functor.arity {
                out.push(Violation::TupleArity { functor: functor.clone(), found: args.len() });
            }
        }
    }

    for (parts, kind) in [(&frame.cparts, PartKind::Complete), (&frame.gparts, PartKind::Gappy)] {
        for (name, part) in parts {
            if part.kind != kind {
                out.push(Violation::WrongPartitionKind { name: name.clone() });
            }
            check_partitioning(&mut out, name, part, kind, &tl);
        }
    }
    out
}

fn check_partitioning(out: &mut Vec<Violation>, name: &str, part: &Partitioning, kind: PartKind, tl: &Timeline) {
    for b in &part.blocks {
        if !tl.contains_period(*b) {
            out.push(Violation::PeriodOffTimeline { location: format!("partitioning {name}"), period: *b });
        }
    }
    for w in part.blocks.windows(2) {
        if w[1].lo() <= w[0].hi() {
            out.push(Violation::OverlappingBlocks { name: name.to_string(), first: w[0], second: w[1] });
        }
    }
    let covered = |t: Point| part.blocks.iter().any(|b| b.contains(t));
    match kind {
        PartKind::Complete => {
            if let Some(missing) = (0..tl.size()).find(|&t| !covered(t)) {
                out.push(Violation::IncompletePartitioning { name: name.to_string(), missing });
            }
        }
        PartKind::Gappy => {
            if (0..tl.size()).all(covered) {
                out.push(Violation::CoveringGappyPartitioning { name: name.to_string() });
            }
        }
    }
}
