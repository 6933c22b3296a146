//! `topbot`: parse, translate, evaluate and cross-check TOP and BOT formulas.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use topbot::bot::{self, denot_bot_witness, parse_bot};
use topbot::equiv::{run_campaign, GenParams};
use topbot::model_file::{self, ModelFile};
use topbot::top::{self, denot_top_witness, parse_top};
use topbot::translate::{alpha_equivalent, translate, Mutation};
use topbot::{derive_bot_model, Assignment, EtaMapping, Frame};

const INPUT_ERROR: u8 = 1;
const ALPHA_MISMATCH: u8 = 2;
const DISAGREEMENT: u8 = 3;

#[derive(Parser)]
#[command(name = "topbot", version, about = "TOP and BOT temporal meaning representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lang {
    Top,
    Bot,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    DropPastNarrowing,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it in canonical form.
    Parse {
        lang: Lang,
        /// Formula text, or `-` to read standard input.
        text: String,
    },
    /// Translate a TOP formula into BOT.
    Translate {
        /// Formula text, or `-` to read standard input.
        text: String,
        /// Compare the result against the BOT formula in FILE, up to renaming
        /// of variables introduced by the translation.
        #[arg(long, value_name = "FILE")]
        check_alpha: Option<PathBuf>,
    },
    /// Evaluate a formula against a model file at its speech time.
    Eval {
        model: PathBuf,
        lang: Lang,
        /// Formula text, or `-` to read standard input.
        text: String,
        /// Print the satisfying assignment when the answer is true.
        #[arg(long)]
        trace: bool,
    },
    /// Compare TOP and BOT denotations on generated cases.
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: u64,
        #[arg(long, default_value_t = GenParams::default().timeline_size)]
        timeline: usize,
        #[arg(long, default_value_t = GenParams::default().atom_count)]
        atoms: usize,
        #[arg(long, default_value_t = GenParams::default().pred_count)]
        preds: usize,
        #[arg(long, default_value_t = GenParams::default().max_arity)]
        arity: usize,
        #[arg(long, default_value_t = GenParams::default().max_depth)]
        depth: usize,
        #[arg(long, default_value_t = GenParams::default().max_periods)]
        periods: usize,
        #[arg(long, default_value_t = GenParams::default().max_vars)]
        vars: usize,
        /// Break a translation rule on purpose.
        #[arg(long, value_enum)]
        mutate: Option<MutationArg>,
    },
}

/// `println!` that reports a closed stdout instead of panicking.
macro_rules! emit {
    ($($arg:tt)*) => {
        writeln!(io::stdout().lock(), $($arg)*)?
    };
}

fn read_text(text: &str) -> Result<String> {
    if text == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading standard input")?;
        Ok(buf)
    } else {
        Ok(text.to_string())
    }
}

fn load_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    model_file::compile(&text).with_context(|| format!("in {}", path.display()))
}

fn show_assignment(frame: &Frame, g: &Assignment) -> String {
    if g.is_empty() {
        return "(no variables)".to_string();
    }
    g.iter().map(|(v, o)| format!("?{v}={}", frame.show(o))).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Parse { lang, text } => {
            let text = read_text(&text)?;
            match lang {
                Lang::Top => emit!("{}", top::print_top(&parse_top(&text)?)),
                Lang::Bot => emit!("{}", bot::print_bot(&parse_bot(&text)?)),
            }
            Ok(0)
        }
        Command::Translate { text, check_alpha } => {
            let source = parse_top(&read_text(&text)?)?;
            let out = translate(&source)?;
            emit!("{out}");
            if let Some(path) = check_alpha {
                let expected = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let expected = parse_bot(&expected).with_context(|| format!("in {}", path.display()))?;
                if !alpha_equivalent(&out, &expected, &source.free_vars()) {
                    eprintln!("translation differs from {}:\n  expected {expected}", path.display());
                    return Ok(ALPHA_MISMATCH);
                }
            }
            Ok(0)
        }
        Command::Eval { model, lang, text, trace } => {
            let ModelFile { model, speech } = load_model(&model)?;
            let text = read_text(&text)?;
            let frame = &model.frame;
            let witness = match lang {
                Lang::Top => denot_top_witness(&model, speech, &parse_top(&text)?)?
                    .map(|(g, et)| format!("{} et={et}", show_assignment(frame, &g))),
                Lang::Bot => {
                    let bm = derive_bot_model(&model, &EtaMapping::default())?;
                    denot_bot_witness(&bm, speech, &parse_bot(&text)?)?.map(|g| show_assignment(frame, &g))
                }
            };
            emit!("{}", witness.is_some());
            if let (true, Some(w)) = (trace, witness) {
                emit!("{w}");
            }
            Ok(0)
        }
        Command::Check { seed, cases, timeline, atoms, preds, arity, depth, periods, vars, mutate } => {
            let params = GenParams {
                timeline_size: timeline,
                atom_count: atoms,
                pred_count: preds,
                max_arity: arity,
                max_depth: depth,
                max_periods: periods,
                max_vars: vars,
                seed,
            };
            params.check()?;
            let mutation = mutate.map(|MutationArg::DropPastNarrowing| Mutation::DropPastNarrowing);
            let report = run_campaign(&params, cases, mutation);
            emit!("{report}");
            if report.passed() {
                Ok(0)
            } else {
                Ok(DISAGREEMENT)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
