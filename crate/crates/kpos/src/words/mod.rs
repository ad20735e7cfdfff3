//! Words over the alphabets 𝕊 (Chevalley, Jacobi and K letters) and 𝕋
//! (upper Chevalley letters and T), parametrized words and their evaluation.

mod canon;
mod rules;
mod search;
mod solve;
mod split;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, parse_rational, Matrix, Rational};
use crate::generators::{chevalley_any, k_matrix, t_matrix, Chevalley, Family};

pub use canon::{canonicalize, Granularity};
pub use rules::{
    apply_rule, catalog, verify_catalog, verify_rule, Direction, Outcome, RewriteRule, RuleId, RuleInstance,
    VerificationReport,
};
pub use search::{moves, reachable, search_canonical, SearchLimit};
pub use solve::solve;
pub use split::{cell_split, split_branch, SplitBranch};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown token `{0}`")]
    BadToken(String),
    #[error("letter {letter} is not legal for n = {n} in mode {mode}")]
    IllegalLetter { letter: Letter, n: usize, mode: Mode },
    #[error("expected {expected} parameters, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("parameters must be strictly positive")]
    NonPositive,
    #[error("malformed parameter word document: {0}")]
    BadDocument(String),
    #[error("words with two K/T letters must be factored as matrices instead")]
    TwoGenerators,
    #[error("the pattern e(n-1) e(n-2) T needs cell_split before it has a fine cell")]
    CellSplitRequired,
    #[error("rule does not match at position {0}")]
    PatternMismatch(usize),
    #[error("transform undefined or nonpositive here")]
    DomainViolation,
    #[error("rewrite changed the evaluated matrix")]
    Unsound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    S,
    T,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::S => "S",
            Mode::T => "T",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    E(usize),
    F(usize),
    H(usize),
    K,
    T,
}

impl Letter {
    pub fn is_chevalley(&self) -> bool {
        matches!(self, Letter::E(_) | Letter::F(_))
    }

    pub fn is_generator(&self) -> bool {
        matches!(self, Letter::K | Letter::T)
    }

    pub fn length(&self, n: usize) -> usize {
        match self {
            Letter::E(_) | Letter::F(_) => 1,
            Letter::H(_) => 0,
            Letter::K => 2 * n - 3,
            Letter::T => 2 * n - 5,
        }
    }

    pub fn param_count(&self, n: usize) -> usize {
        match self {
            Letter::K => 2 * n - 3,
            Letter::T => 2 * n - 5,
            _ => 1,
        }
    }

    pub fn is_legal(&self, n: usize, mode: Mode) -> bool {
        match (self, mode) {
            (Letter::E(i), _) => (1..n).contains(i),
            (Letter::F(i), Mode::S) => (1..n).contains(i),
            (Letter::H(i), Mode::S) => (1..=n).contains(i),
            (Letter::K, Mode::S) => n >= 3,
            (Letter::T, Mode::T) => n >= 4,
            _ => false,
        }
    }

    /// Generator matrix; `params` must have `param_count` entries.
    pub fn matrix(&self, n: usize, params: &[Rational]) -> Matrix {
        match *self {
            Letter::E(i) => chevalley_any(n, Chevalley::E, i, &params[0]),
            Letter::F(i) => chevalley_any(n, Chevalley::F, i, &params[0]),
            Letter::H(i) => {
                let mut m = Matrix::identity(n);
                m.set(i, i, params[0].clone());
                m
            }
            Letter::K => k_matrix(&params[..n - 2], &params[n - 2..]),
            Letter::T => t_matrix(&params[..n - 3], &params[n - 3..]),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::E(i) => write!(f, "e{i}"),
            Letter::F(i) => write!(f, "f{i}"),
            Letter::H(i) => write!(f, "h{i}"),
            Letter::K => f.write_str("K"),
            Letter::T => f.write_str("T"),
        }
    }
}

impl FromStr for Letter {
    type Err = WordError;
    fn from_str(tok: &str) -> Result<Self, WordError> {
        let bad = || WordError::BadToken(tok.to_string());
        match tok {
            "K" => return Ok(Letter::K),
            "T" => return Ok(Letter::T),
            _ => {}
        }
        let (head, idx) = tok.split_at(tok.char_indices().nth(1).map(|(p, _)| p).ok_or_else(bad)?);
        let i: usize = idx.parse().map_err(|_| bad())?;
        match head {
            "e" => Ok(Letter::E(i)),
            "f" => Ok(Letter::F(i)),
            "h" => Ok(Letter::H(i)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub n: usize,
    pub mode: Mode,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(n: usize, mode: Mode, letters: Vec<Letter>) -> Result<Self, WordError> {
        if let Some(&letter) = letters.iter().find(|l| !l.is_legal(n, mode)) {
            return Err(WordError::IllegalLetter { letter, n, mode });
        }
        Ok(Word { n, mode, letters })
    }

    pub fn empty(n: usize, mode: Mode) -> Self {
        Word { n, mode, letters: Vec::new() }
    }

    pub fn parse(n: usize, mode: Mode, text: &str) -> Result<Self, WordError> {
        let letters = text.split_whitespace().map(str::parse).collect::<Result<Vec<Letter>, _>>()?;
        Self::new(n, mode, letters)
    }

    pub fn length(&self) -> usize {
        self.letters.iter().map(|l| l.length(self.n)).sum()
    }

    pub fn param_count(&self) -> usize {
        self.letters.iter().map(|l| l.param_count(self.n)).sum()
    }

    pub fn generator_count(&self) -> usize {
        self.letters.iter().filter(|l| l.is_generator()).count()
    }

    pub fn family(&self) -> Option<Family> {
        self.letters.iter().find_map(|l| match l {
            Letter::K => Some(Family::K),
            Letter::T => Some(Family::T),
            _ => None,
        })
    }

    pub fn tokens(&self) -> Vec<String> {
        self.letters.iter().map(|l| l.to_string()).collect()
    }

    /// Offsets of each letter's parameters in a flat parameter list.
    pub fn param_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.letters.len() + 1);
        let mut acc = 0;
        for l in &self.letters {
            out.push(acc);
            acc += l.param_count(self.n);
        }
        out.push(acc);
        out
    }

    pub fn without_h(&self) -> Word {
        Word {
            n: self.n,
            mode: self.mode,
            letters: self.letters.iter().copied().filter(|l| !matches!(l, Letter::H(_))).collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens().join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamWord {
    pub word: Word,
    pub params: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct ParamWordDoc {
    n: usize,
    mode: Mode,
    letters: Vec<String>,
    params: Vec<String>,
}

impl ParamWord {
    pub fn new(word: Word, params: Vec<Rational>) -> Result<Self, WordError> {
        let pw = Self::unchecked(word, params)?;
        if pw.params.iter().any(|p| *p <= Rational::from_integer(0.into())) {
            return Err(WordError::NonPositive);
        }
        Ok(pw)
    }

    /// Arity-checked only; boundary limits use zero parameters.
    pub fn unchecked(word: Word, params: Vec<Rational>) -> Result<Self, WordError> {
        let expected = word.param_count();
        if params.len() != expected {
            return Err(WordError::Arity { expected, got: params.len() });
        }
        Ok(ParamWord { word, params })
    }

    pub fn n(&self) -> usize {
        self.word.n
    }

    pub fn letter_params(&self, idx: usize) -> &[Rational] {
        let off = self.word.param_offsets();
        &self.params[off[idx]..off[idx + 1]]
    }

    pub fn evaluate(&self) -> Matrix {
        let n = self.n();
        let off = self.word.param_offsets();
        self.word
            .letters
            .iter()
            .enumerate()
            .fold(Matrix::identity(n), |acc, (k, l)| acc.times(&l.matrix(n, &self.params[off[k]..off[k + 1]])))
    }

    pub fn to_json(&self) -> String {
        let doc = ParamWordDoc {
            n: self.n(),
            mode: self.word.mode,
            letters: self.word.tokens(),
            params: self.params.iter().map(format_rational).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, WordError> {
        let doc: ParamWordDoc = serde_json::from_str(text).map_err(|e| WordError::BadDocument(e.to_string()))?;
        let letters = doc.letters.iter().map(|t| t.parse()).collect::<Result<Vec<Letter>, _>>()?;
        let word = Word::new(doc.n, doc.mode, letters)?;
        let params = doc
            .params
            .iter()
            .map(|p| parse_rational(p).map_err(|e| WordError::BadDocument(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(word, params)
    }
}

impl fmt::Display for ParamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let off = self.word.param_offsets();
        let parts: Vec<String> = self
            .word
            .letters
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let ps: Vec<String> = self.params[off[k]..off[k + 1]].iter().map(format_rational).collect();
                format!("{l}({})", ps.join(","))
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn length(w: &Word) -> usize {
    w.length()
}

pub fn evaluate(pw: &ParamWord) -> Matrix {
    pw.evaluate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn lengths() {
        assert_eq!(Word::empty(3, Mode::S).length(), 0);
        assert_eq!(Word::parse(3, Mode::S, "K").unwrap().length(), 3);
        assert_eq!(Word::parse(5, Mode::T, "e3 e4 T").unwrap().length(), 7);
        assert_eq!(Word::parse(3, Mode::S, "h1 h2 e1").unwrap().length(), 1);
    }

    #[test]
    fn legality() {
        assert!(Word::parse(3, Mode::T, "f1 T").is_err());
        assert!(Word::parse(3, Mode::S, "e3").is_err());
        assert!(Word::parse(4, Mode::S, "T").is_err());
        assert!(Word::parse(4, Mode::T, "h1").is_err());
        assert!(Word::parse(4, Mode::T, "x1").is_err());
    }

    #[test]
    fn evaluation() {
        let pw = ParamWord::new(Word::parse(2, Mode::S, "e1").unwrap(), vec![int(1)]).unwrap();
        assert_eq!(pw.evaluate(), Matrix::from_ints(&[&[1, 1], &[0, 1]]));
        let k = ParamWord::new(Word::parse(3, Mode::S, "K").unwrap(), vec![int(1); 3]).unwrap();
        assert_eq!(k.evaluate(), Matrix::from_ints(&[&[1, 1, 0], &[1, 1, 1], &[0, 1, 1]]));
        assert_eq!(ParamWord::new(Word::empty(3, Mode::S), vec![]).unwrap().evaluate(), Matrix::identity(3));
    }

    #[test]
    fn json_round_trip() {
        let pw = ParamWord::new(Word::parse(4, Mode::T, "e3 T").unwrap(), vec![int(2), int(1), int(3), int(5)]).unwrap();
        let back = ParamWord::from_json(&pw.to_json()).unwrap();
        assert_eq!(back, pw);
        assert!(ParamWord::from_json(r#"{"n":3,"mode":"S","letters":["e1"],"params":["0"]}"#).is_err());
    }
}
