//! Line-oriented text format for TOP models.
//!
//! ```text
//! timeline 10            # points 0..9
//! speech 7
//! object tank5
//! periodconst d_jan = [3,4]
//! pred empty/1
//! maximal empty(tank5) = [2,5]
//! culm building(housecorp, bridge2) = true
//! cpart minute = blocks 1
//! gpart fivepm = [3,3] [7,7]
//! ```
//!
//! Tuple arguments are constant names or literal periods `[lo,hi]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{validate_model, Functor, Obj, Partitioning, TopModel, Violation};
use crate::syntax::{is_identifier, is_reserved};
use crate::time::{Period, Point, Timeline};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error("invalid model: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A compiled model file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub model: TopModel,
    pub speech: Point,
}

struct Line<'a> {
    rest: &'a str,
    number: usize,
}

type Res<T> = Result<T, ModelFileError>;

impl<'a> Line<'a> {
    fn fail<T>(&self, message: impl Into<String>) -> Res<T> {
        Err(ModelFileError::Syntax { line: self.number, message: message.into() })
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn word(&mut self) -> Res<&'a str> {
        self.skip_ws();
        let end = self.rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(self.rest.len());
        if end == 0 {
            return self.fail(format!("expected a name at `{}`", self.rest));
        }
        let (w, rest) = self.rest.split_at(end);
        self.rest = rest;
        Ok(w)
    }

    fn name(&mut self, what: &str) -> Res<String> {
        let w = self.word()?;
        if !is_identifier(w) {
            return self.fail(format!("`{w}` is not a valid {what} name"));
        }
        if is_reserved(w) {
            return self.fail(format!("`{w}` is a reserved word and cannot name a {what}"));
        }
        Ok(w.to_string())
    }

    fn number(&mut self) -> Res<usize> {
        let w = self.word()?;
        match w.parse() {
            Ok(n) => Ok(n),
            Err(_) => self.fail(format!("expected a number, found `{w}`")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        match self.rest.strip_prefix(c) {
            Some(rest) => {
                self.rest = rest;
                true
            }
            None => false,
        }
    }

    fn expect(&mut self, c: char) -> Res<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(format!("expected `{c}` at `{}`", self.rest))
        }
    }

    fn peek_is(&mut self, c: char) -> bool {
        self.skip_ws();
        self.rest.starts_with(c)
    }

    fn period(&mut self, tl: &Timeline) -> Res<Period> {
        self.expect('[')?;
        let lo = self.number()?;
        self.expect(',')?;
        let hi = self.number()?;
        self.expect(']')?;
        match Period::new(lo, hi) {
            Ok(p) if tl.contains_period(p) => Ok(p),
            Ok(p) => self.fail(format!("period {p} lies outside the timeline")),
            Err(e) => self.fail(e.to_string()),
        }
    }

    fn periods(&mut self, tl: &Timeline) -> Res<Vec<Period>> {
        let mut out = vec![self.period(tl)?];
        while self.peek_is('[') {
            out.push(self.period(tl)?);
        }
        Ok(out)
    }

    fn end(&mut self) -> Res<()> {
        self.skip_ws();
        if self.rest.is_empty() {
            Ok(())
        } else {
            self.fail(format!("unexpected `{}`", self.rest))
        }
    }
}

/// Compiles model-file text and validates the result.
pub fn compile(text: &str) -> Result<ModelFile, ModelFileError> {
    let mut model: Option<TopModel> = None;
    let mut speech = None;
    let mut arities: BTreeMap<String, usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut line = Line { rest: content, number: i + 1 };
        let keyword = line.word()?;
        let Some(m) = model.as_mut() else {
            if keyword != "timeline" {
                return line.fail("the first declaration must be `timeline`");
            }
            let size = line.number()?;
            line.end()?;
            match Timeline::new(size) {
                Ok(tl) => model = Some(TopModel::new(tl)),
                Err(e) => return line.fail(e.to_string()),
            }
            continue;
        };
        let tl = *m.timeline();
        match keyword {
            "timeline" => return line.fail("duplicate `timeline` declaration"),
            "speech" => {
                let t = line.number()?;
                if speech.is_some() {
                    return line.fail("duplicate `speech` declaration");
                }
                if !tl.contains(t) {
                    return line.fail(format!("speech time {t} is not on the timeline"));
                }
                speech = Some(t);
            }
            "object" => {
                let name = line.name("constant")?;
                if m.frame.consts.contains_key(&name) {
                    return line.fail(format!("`{name}` is already declared"));
                }
                m.frame.add_atom(&name);
            }
            "periodconst" => {
                let name = line.name("constant")?;
                line.expect('=')?;
                let p = line.period(&tl)?;
                if m.frame.consts.insert(name.clone(), Obj::Period(p)).is_some() {
                    return line.fail(format!("`{name}` is already declared"));
                }
            }
            "pred" => {
                let name = line.name("functor")?;
                line.expect('/')?;
                let arity = line.number()?;
                if arity == 0 {
                    return line.fail("arity must be at least 1");
                }
                if arities.insert(name.clone(), arity).is_some() {
                    return line.fail(format!("predicate `{name}` is already declared"));
                }
                m.declare_pred(&name, arity);
            }
            "maximal" | "culm" => {
                let (functor, args) = tuple(&mut line, m, &arities)?;
                line.expect('=')?;
                if keyword == "maximal" {
                    for p in line.periods(&tl)? {
                        m.add_maximal(&functor, args.clone(), p);
                    }
                } else {
                    match line.word()? {
                        "true" => m.set_culm(&functor, args),
                        "false" => {}
                        other => return line.fail(format!("expected `true` or `false`, found `{other}`")),
                    }
                }
            }
            "cpart" | "gpart" => {
                let name = line.name("partitioning")?;
                if m.frame.partitioning(&name).is_some() {
                    return line.fail(format!("partitioning `{name}` is already declared"));
                }
                line.expect('=')?;
                if keyword == "cpart" {
                    let part = if line.peek_is('[') {
                        let mut blocks = line.periods(&tl)?;
                        blocks.sort();
                        Partitioning::complete(blocks)
                    } else {
                        match line.word()? {
                            "blocks" => {}
                            other => return line.fail(format!("expected `blocks` or a period list, found `{other}`")),
                        }
                        let k = line.number()?;
                        if k == 0 || tl.size() % k != 0 {
                            return line.fail(format!("block length {k} does not divide the timeline"));
                        }
                        Partitioning::uniform(&tl, k)
                    };
                    m.frame.cparts.insert(name, part);
                } else {
                    // A gappy partitioning may have no blocks at all.
                    line.skip_ws();
                    let mut blocks = if line.rest.is_empty() { Vec::new() } else { line.periods(&tl)? };
                    blocks.sort();
                    m.frame.gparts.insert(name, Partitioning::gappy(blocks));
                }
            }
            other => return line.fail(format!("unknown declaration `{other}`")),
        }
        line.end()?;
    }
    let model = model.ok_or(ModelFileError::Missing("timeline"))?;
    let speech = speech.ok_or(ModelFileError::Missing("speech"))?;
    let violations = validate_model(&model);
    if !violations.is_empty() {
        return Err(ModelFileError::Invalid(violations));
    }
    Ok(ModelFile { model, speech })
}

fn tuple(line: &mut Line<'_>, m: &TopModel, arities: &BTreeMap<String, usize>) -> Res<(Functor, Vec<Obj>)> {
    let name = line.name("functor")?;
    let Some(&arity) = arities.get(&name) else {
        return line.fail(format!("predicate `{name}` is not declared"));
    };
    line.expect('(')?;
    let mut args = Vec::new();
    loop {
        if line.peek_is('[') {
            args.push(Obj::Period(line.period(m.timeline())?));
        } else {
            let c = line.word()?;
            match m.frame.consts.get(c) {
                Some(o) => args.push(*o),
                None => return line.fail(format!("unknown constant `{c}`")),
            }
        }
        if !line.eat(',') {
            break;
        }
    }
    line.expect(')')?;
    if args.len() != arity {
        return line.fail(format!("`{name}` takes {arity} arguments, found {}", args.len()));
    }
    Ok((Functor::new(name, arity), args))
}

/// Writes `m` in model-file syntax; [`compile`] reads it back unchanged.
pub fn serialize(m: &TopModel, speech: Point) -> String {
    let tl = m.timeline();
    let mut out = String::new();
    let _ = writeln!(out, "timeline {}", tl.size());
    let _ = writeln!(out, "speech {speech}");
    for a in &m.frame.domain.atoms {
        let _ = writeln!(out, "object {a}");
    }
    for (name, obj) in &m.frame.consts {
        if let Obj::Period(p) = obj {
            let _ = writeln!(out, "periodconst {name} = {p}");
        }
    }
    let show = |args: &[Obj]| {
        args.iter()
            .map(|o| match o {
                Obj::Atom(i) => m.frame.domain.atoms[*i].clone(),
                Obj::Period(p) => p.to_string(),
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    for (functor, ext) in &m.preds {
        let _ = writeln!(out, "pred {}/{}", functor.name, functor.arity);
        for (args, periods) in ext {
            if periods.is_empty() {
                continue;
            }
            let ps: Vec<String> = periods.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "maximal {}({}) = {}", functor.name, show(args), ps.join(" "));
        }
        for args in m.culms.get(functor).into_iter().flatten() {
            let _ = writeln!(out, "culm {}({}) = true", functor.name, show(args));
        }
    }
    let list = |p: &Partitioning| p.blocks.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    for (name, p) in &m.frame.cparts {
        let uniform = (1..=tl.size()).find(|&k| tl.size().is_multiple_of(k) && *p == Partitioning::uniform(tl, k));
        match uniform {
            Some(k) => writeln!(out, "cpart {name} = blocks {k}"),
            None => writeln!(out, "cpart {name} = {}", list(p)),
        }
        .expect("writing to a String");
    }
    for (name, p) in &m.frame.gparts {
        let _ = writeln!(out, "gpart {name} = {}", list(p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{m0, M0_SPEECH, M0_TEXT};

    fn err_line(text: &str) -> usize {
        match compile(text) {
            Err(ModelFileError::Syntax { line, .. }) => line,
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn fixture_text_compiles_to_m0() {
        let mf = compile(M0_TEXT).unwrap();
        assert_eq!(mf.model, m0());
        assert_eq!(mf.speech, M0_SPEECH);
    }

    #[test]
    fn serialize_round_trips() {
        let mf = compile(M0_TEXT).unwrap();
        let text = serialize(&mf.model, mf.speech);
        assert_eq!(compile(&text).unwrap(), mf);
        let mut m = mf.model.clone();
        m.frame.cparts.insert("odd".into(), Partitioning::complete(vec![
            Period::new(0, 2).unwrap(),
            Period::new(3, 9).unwrap(),
        ]));
        let f = m.declare_pred("at", 1);
        m.add_maximal(&f, vec![Obj::Period(Period::new(1, 1).unwrap())], Period::new(0, 9).unwrap());
        let text = serialize(&m, 0);
        assert_eq!(compile(&text).unwrap(), ModelFile { model: m, speech: 0 });
    }

    #[test]
    fn reports_line_numbers() {
        assert_eq!(err_line("speech 1"), 1);
        assert_eq!(err_line("timeline 4\nspeech 9"), 2);
        assert_eq!(err_line("timeline 4\nspeech 1\n\n# note\nmaximal p(x) = [0,1]"), 5);
        assert_eq!(err_line("timeline 4\nspeech 1\nobject x\npred p/1\nmaximal p(y) = [0,1]"), 5);
        assert_eq!(err_line("timeline 4\nspeech 1\nobject x\npred p/2\nmaximal p(x) = [0,1]"), 5);
        assert_eq!(err_line("timeline 4\nspeech 1\nobject now"), 3);
        assert_eq!(err_line("timeline 4\nspeech 1\ncpart m = blocks 3"), 3);
        assert_eq!(err_line("timeline 4\nspeech 1\nperiodconst d = [2,7]"), 3);
        assert_eq!(err_line("timeline 4\nspeech 1\nobject x\nobject x"), 4);
        assert_eq!(err_line("timeline 4\nspeech 1\nfrobnicate"), 3);
        assert_eq!(err_line("timeline 4\nspeech 1 2"), 2);
    }

    #[test]
    fn missing_declarations() {
        assert_eq!(compile(""), Err(ModelFileError::Missing("timeline")));
        assert_eq!(compile("timeline 3"), Err(ModelFileError::Missing("speech")));
    }

    #[test]
    fn validation_runs_after_compiling() {
        let text = "timeline 6\nspeech 1\nobject x\npred p/1\nmaximal p(x) = [0,1] [2,3]";
        assert!(matches!(compile(text), Err(ModelFileError::Invalid(v)) if !v.is_empty()));
        let empty_gappy = compile("timeline 3\nspeech 0\ngpart none =\n").unwrap();
        assert!(empty_gappy.model.frame.gparts["none"].blocks.is_empty());
        assert_eq!(compile(&serialize(&empty_gappy.model, 0)).unwrap(), empty_gappy);
        let gappy_covers = "timeline 2\nspeech 0\ngpart g = [0,0] [1,1]";
        assert!(matches!(compile(gappy_covers), Err(ModelFileError::Invalid(_))));
    }
}
