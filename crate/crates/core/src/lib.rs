//! TOP and BOT: two temporal meaning-representation languages for questions
//! over a discrete, bounded timeline, and the rewrite from TOP to BOT.
//!
//! * [`top`] parses and evaluates TOP formulas against a [`TopModel`].
//! * [`bot`] parses and evaluates BOT formulas against a [`BotModel`].
//! * [`translate`] rewrites TOP into BOT; [`derive_bot_model`] builds the BOT
//!   model the output is evaluated against.
//! * [`equiv`] generates random models and formulas and checks that both
//!   sides denote the same truth value.

pub mod bot;
pub mod equiv;
pub mod fixtures;
pub mod model;
pub mod model_file;
pub mod syntax;
pub mod time;
pub mod top;
pub mod translate;

pub use model::{
    derive_bot_model, validate_model, Assignment, BotModel, EtaMapping, EvalError, Frame, Functor, Obj,
    ObjectDomain, PartKind, Partitioning, TopModel, Violation,
};
pub use syntax::{ParseError, Term};
pub use time::{Period, Point, PointSet, Timeline};
