//! Command logic for the `kpos` binary. Every command writes its report to
//! `out` and returns the process exit code: 0 pass, 1 semantic negative,
//! 2 malformed input, 3 domain error.

use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use kpos::cells::{classify, factor, CellMode};
use kpos::exact::{format_rational, parse_matrix, parse_rational, serialize_matrix, Matrix, Rational};
use kpos::poset::closure_poset;
use kpos::positivity::{is_k_nonnegative, is_k_nonnegative_fast, is_k_positive, MinorWitness, PositivityError};
use kpos::random::{positives, prng};
use kpos::words::{canonicalize, verify_catalog, Granularity, ParamWord, Word};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "kpos", version, about = "Exact k-nonnegative matrix factorization, cells and closure posets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "n-1")]
    N1,
    #[value(name = "n-2u")]
    N2u,
}

impl From<ModeArg> for CellMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::N1 => CellMode::N1,
            ModeArg::N2u => CellMode::N2U,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Fine,
    Coarse,
}

impl From<GranularityArg> for Granularity {
    fn from(g: GranularityArg) -> Self {
        match g {
            GranularityArg::Fine => Granularity::Fine,
            GranularityArg::Coarse => Granularity::Coarse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Test k-nonnegativity (or k-positivity) of a matrix document.
    Check {
        /// Matrix document, or `-` for stdin.
        file: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        positive: bool,
        /// Column-solid minors only; needs an invertible matrix.
        #[arg(long)]
        fast: bool,
    },
    /// Factor a matrix into a parametrized word.
    Factor {
        file: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "fine")]
        granularity: GranularityArg,
    },
    /// Print the cell of a matrix.
    Classify {
        file: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "fine")]
        granularity: GranularityArg,
    },
    /// Evaluate a cell word on given or random parameters.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        word: String,
        /// Comma- or space-separated rationals; random when omitted.
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "fine")]
        granularity: GranularityArg,
    },
    /// Export the closure poset of all cells.
    Poset {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "fine")]
        granularity: GranularityArg,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Check every relation on random draws.
    VerifyRelations {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_input(file: &str) -> std::io::Result<String> {
    if file == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(file)
    }
}

fn load_matrix(file: &str, err: &mut dyn Write) -> Result<Matrix, i32> {
    let text = read_input(file).map_err(|e| {
        let _ = writeln!(err, "error: cannot read {file}: {e}");
        EXIT_PARSE
    })?;
    parse_matrix(&text).map_err(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_PARSE
    })
}

fn witness_json(w: &MinorWitness) -> serde_json::Value {
    json!({
        "I": w.rows.as_slice(),
        "J": w.cols.as_slice(),
        "value": format_rational(&w.value),
    })
}

fn parse_params(text: &str) -> Result<Vec<Rational>, String> {
    text.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| parse_rational(t).map_err(|e| e.to_string()))
        .collect()
}

fn emit(out: &mut dyn Write, v: &serde_json::Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Check { file, k, positive, fast } => {
            let m = match load_matrix(&file, err) {
                Ok(m) => m,
                Err(code) => return code,
            };
            let verdict = match (positive, fast) {
                (true, _) => is_k_positive(&m, k),
                (false, true) => is_k_nonnegative_fast(&m, k),
                (false, false) => is_k_nonnegative(&m, k),
            };
            let what = if positive { "k-positive" } else { "k-nonnegative" };
            match verdict {
                Ok(Ok(())) => {
                    emit(out, &json!({"k": k, "property": what, "holds": true}));
                    EXIT_OK
                }
                Ok(Err(w)) => {
                    emit(out, &json!({"k": k, "property": what, "holds": false, "witness": witness_json(&w)}));
                    EXIT_NEGATIVE
                }
                Err(e @ PositivityError::Singular) | Err(e @ PositivityError::NotSquare) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_PARSE
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_DOMAIN
                }
            }
        }
        Command::Factor { file, mode, granularity } => {
            let m = match load_matrix(&file, err) {
                Ok(m) => m,
                Err(code) => return code,
            };
            match factor(&m, mode.into(), granularity.into()) {
                Ok(pw) => {
                    if pw.evaluate() != m {
                        let _ = writeln!(err, "error: factorization does not reproduce the input");
                        return EXIT_DOMAIN;
                    }
                    let doc: serde_json::Value = serde_json::from_str(&pw.to_json()).expect("json");
                    emit(out, &doc);
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_DOMAIN
                }
            }
        }
        Command::Classify { file, mode, granularity } => {
            let m = match load_matrix(&file, err) {
                Ok(m) => m,
                Err(code) => return code,
            };
            match classify(&m, mode.into(), granularity.into()) {
                Ok(cell) => {
                    emit(out, &cell.to_json());
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_DOMAIN
                }
            }
        }
        Command::Sample { n, mode, word, params, seed, granularity } => {
            let cm: CellMode = mode.into();
            let g: Granularity = granularity.into();
            let w = match Word::parse(n, cm.word_mode(), &word) {
                Ok(w) => w,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_PARSE;
                }
            };
            match canonicalize(&w, g) {
                Ok(c) if c == w => {}
                Ok(c) => {
                    let _ = writeln!(err, "error: `{w}` is not a canonical cell word (its cell is `{c}`)");
                    return EXIT_DOMAIN;
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_DOMAIN;
                }
            }
            let values = match params {
                Some(text) => match parse_params(&text) {
                    Ok(v) => v,
                    Err(e) => {
                        let _ = writeln!(err, "error: {e}");
                        return EXIT_PARSE;
                    }
                },
                None => positives(&mut prng(seed), w.param_count()),
            };
            let pw = match ParamWord::new(w.clone(), values) {
                Ok(pw) => pw,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_DOMAIN;
                }
            };
            let m = pw.evaluate();
            match classify(&m, cm, g) {
                Ok(cell) if cell.word == w => {
                    let doc: serde_json::Value = serde_json::from_str(&serialize_matrix(&m)).expect("json");
                    emit(out, &json!({"seed": seed, "word": w.to_string(), "params": pw.params.iter().map(format_rational).collect::<Vec<_>>(), "matrix": doc}));
                    EXIT_OK
                }
                Ok(cell) => {
                    let _ = writeln!(err, "error: sample classified as `{}`", cell.word);
                    EXIT_DOMAIN
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_DOMAIN
                }
            }
        }
        Command::Poset { n, mode, granularity, format } => match closure_poset(n, mode.into(), granularity.into()) {
            Ok(p) => {
                match format {
                    FormatArg::Json => emit(out, &p.to_json()),
                    FormatArg::Dot => {
                        let _ = write!(out, "{}", p.to_dot());
                    }
                }
                EXIT_OK
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_DOMAIN
            }
        },
        Command::VerifyRelations { n, samples, seed } => {
            if n < 3 {
                let _ = writeln!(err, "error: relations need n >= 3");
                return EXIT_DOMAIN;
            }
            let reports = verify_catalog(n, samples, seed, None);
            let all_pass = reports.iter().all(|r| r.passed());
            emit(out, &json!({"n": n, "samples": samples, "seed": seed, "all_pass": all_pass, "reports": reports}));
            if all_pass {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            }
        }
    }
}
