//! Lexing and diagnostics shared by the TOP and BOT parsers.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Names that neither language accepts as a constant, functor or partitioning.
pub const RESERVED: &[&str] = &[
    // TOP operators
    "Part", "Pres", "Past", "Perf", "Culm", "At", "Before", "After", "Fills", "Ntense", "For",
    // BOT keywords
    "beg", "now", "end", "earliest", "latest", "succ", "intersect", "subper", "eq", "period",
    "part", "prec",
];

pub fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name)
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("functor `{functor}` is used with {first} and with {second} arguments")]
    Arity { functor: String, first: usize, second: usize },
}

/// A constant or a variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => f.write_str(c),
            Term::Var(v) => write!(f, "?{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Int(u64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Amp,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Var(s) => write!(f, "`?{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let single = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '&' => Some(Tok::Amp),
            _ => None,
        };
        if let Some(tok) = single {
            bump!();
            out.push(Spanned { tok, line: l, column: col });
            continue;
        }
        if c.is_whitespace() {
            bump!();
        } else if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
        } else if c == '?' {
            bump!();
            let name = take_word(&mut chars, &mut column);
            if !is_identifier(&name) {
                return Err(ParseError::Syntax {
                    line: l,
                    column: col,
                    message: "expected a variable name after `?`".into(),
                });
            }
            out.push(Spanned { tok: Tok::Var(name), line: l, column: col });
        } else if c.is_ascii_digit() {
            let word = take_word(&mut chars, &mut column);
            let n = word.parse().map_err(|_| ParseError::Syntax {
                line: l,
                column: col,
                message: format!("malformed number `{word}`"),
            })?;
            out.push(Spanned { tok: Tok::Int(n), line: l, column: col });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let word = take_word(&mut chars, &mut column);
            out.push(Spanned { tok: Tok::Ident(word), line: l, column: col });
        } else {
            return Err(ParseError::Syntax {
                line: l,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

fn take_word(chars: &mut std::iter::Peekable<std::str::Chars<'_>>, column: &mut usize) -> String {
    let mut word = String::new();
    while let Some(&c) = chars.peek() {
        if c.is_ascii_alphanumeric() || c == '_' {
            word.push(c);
            chars.next();
            *column += 1;
        } else {
            break;
        }
    }
    word
}

/// Token cursor with the helpers both recursive-descent parsers need.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
    arities: BTreeMap<String, usize>,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Self { toks: lex(text)?, pos: 0, arities: BTreeMap::new() })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn next(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError::Syntax { line: s.line, column: s.column, message: message.into() })
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => self.error(format!("unexpected {other} after formula")),
        }
    }

    pub fn var(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.next();
                Ok(v)
            }
            other => self.error(format!("expected a variable, found {other}")),
        }
    }

    /// A non-reserved identifier (constant, functor or partitioning name).
    pub fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                self.next();
                Ok(s)
            }
            Tok::Ident(s) => self.error(format!("`{s}` is reserved and cannot be used as a {what}")),
            other => self.error(format!("expected a {what}, found {other}")),
        }
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Var(_) => self.var().map(Term::Var),
            _ => self.name("constant").map(Term::Const),
        }
    }

    pub fn record_arity(&mut self, functor: &str, arity: usize) -> Result<(), ParseError> {
        match self.arities.get(functor) {
            Some(&first) if first != arity => Err(ParseError::Arity {
                functor: functor.to_string(),
                first,
                second: arity,
            }),
            _ => {
                self.arities.insert(functor.to_string(), arity);
                Ok(())
            }
        }
    }
}
