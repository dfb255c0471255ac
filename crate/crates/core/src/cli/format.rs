//! The line-oriented series file format.
//!
//! ```text
//! # comment
//! prime: 3
//! term: -1 1
//! term: 0 1/3
//! tail+: linear 0 1
//! tail-: zero
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::series::{LaurentSeries, TailCertificate, TailDirection, TailKind};
use crate::valuation::PrimeContext;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesDocument {
    pub prime: u64,
    pub terms: Vec<(i64, BigRational)>,
    pub tail_pos: TailCertificate,
    pub tail_neg: TailCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("duplicate exponent {0}")]
    DuplicateExponent(i64),
    #[error("the first entry must be `prime: <p>`")]
    MissingPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// Integer or `num/den` with a positive denominator.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let unsigned = num.strip_prefix(['-', '+']).unwrap_or(num);
    if !digits(unsigned) {
        return None;
    }
    let num = BigInt::from_str(num).ok()?;
    let den = match den {
        Some(d) if digits(d) => BigInt::from_str(d).ok()?,
        Some(_) => return None,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((base + s[..b].chars().count(), &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

struct Line<'a> {
    number: usize,
    key: &'a str,
    key_col: usize,
    args: Vec<(usize, &'a str)>,
    end_col: usize,
}

impl Line<'_> {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.number,
            column,
            kind,
        }
    }

    fn arity(&self, n: usize, usage: &str) -> std::result::Result<(), ParseError> {
        if self.args.len() == n {
            return Ok(());
        }
        let col = self.args.get(n).map_or(self.end_col, |a| a.0);
        Err(self.err(col, ParseErrorKind::Syntax(format!("expected `{usage}`"))))
    }

    fn rational(&self, i: usize) -> std::result::Result<BigRational, ParseError> {
        let (col, tok) = self.args[i];
        parse_rational(tok).ok_or_else(|| self.err(col, ParseErrorKind::MalformedRational(tok.into())))
    }
}

fn split_line(number: usize, raw: &str) -> std::result::Result<Option<Line<'_>>, ParseError> {
    let content = raw.split('#').next().unwrap_or("");
    if content.trim().is_empty() {
        return Ok(None);
    }
    let lead = content.len() - content.trim_start().len();
    let key_col = content[..lead].chars().count() + 1;
    let Some((key, rest)) = content.split_once(':') else {
        return Err(ParseError {
            line: number,
            column: key_col,
            kind: ParseErrorKind::Syntax("expected `key: value`".into()),
        });
    };
    let rest_col = key.chars().count() + 2;
    Ok(Some(Line {
        number,
        key: key.trim(),
        key_col,
        args: tokens(rest, rest_col),
        end_col: content.trim_end().chars().count() + 1,
    }))
}

fn is_prime(p: u64) -> bool {
    PrimeContext::new(p).is_ok()
}

pub fn parse_series_file(text: &str) -> std::result::Result<SeriesDocument, ParseError> {
    let mut prime = None;
    let mut terms = Vec::new();
    let mut seen = BTreeSet::new();
    let mut tail_pos = None;
    let mut tail_neg = None;

    for (idx, raw) in text.lines().enumerate() {
        let Some(line) = split_line(idx + 1, raw)? else {
            continue;
        };
        if prime.is_none() && line.key != "prime" {
            return Err(line.err(line.key_col, ParseErrorKind::MissingPrime));
        }
        match line.key {
            "prime" => {
                if prime.is_some() {
                    return Err(line.err(line.key_col, ParseErrorKind::Syntax("prime given twice".into())));
                }
                line.arity(1, "prime: <integer>")?;
                let (col, tok) = line.args[0];
                let p: u64 = tok
                    .parse()
                    .map_err(|_| line.err(col, ParseErrorKind::Syntax(format!("bad prime `{tok}`"))))?;
                if !is_prime(p) {
                    return Err(line.err(col, ParseErrorKind::NonPrime(p)));
                }
                prime = Some(p);
            }
            "term" => {
                line.arity(2, "term: <exponent> <rational>")?;
                let (col, tok) = line.args[0];
                let n: i64 = tok
                    .parse()
                    .map_err(|_| line.err(col, ParseErrorKind::Syntax(format!("bad exponent `{tok}`"))))?;
                if !seen.insert(n) {
                    return Err(line.err(col, ParseErrorKind::DuplicateExponent(n)));
                }
                terms.push((n, line.rational(1)?));
            }
            "tail+" => {
                if tail_pos.is_some() {
                    return Err(line.err(line.key_col, ParseErrorKind::Syntax("tail+ given twice".into())));
                }
                tail_pos = Some(match line.args.first().map(|a| a.1) {
                    Some("zero") => {
                        line.arity(1, "tail+: zero")?;
                        TailCertificate::zero(TailDirection::Positive)
                    }
                    Some("linear") => {
                        line.arity(3, "tail+: linear <A> <B>")?;
                        TailCertificate::linear(line.rational(1)?, line.rational(2)?)
                    }
                    _ => {
                        let col = line.args.first().map_or(line.end_col, |a| a.0);
                        return Err(line.err(col, ParseErrorKind::Syntax("expected `zero` or `linear`".into())));
                    }
                });
            }
            "tail-" => {
                if tail_neg.is_some() {
                    return Err(line.err(line.key_col, ParseErrorKind::Syntax("tail- given twice".into())));
                }
                tail_neg = Some(match line.args.first().map(|a| a.1) {
                    Some("zero") => {
                        line.arity(1, "tail-: zero")?;
                        TailCertificate::zero(TailDirection::Negative)
                    }
                    Some("essential") => {
                        line.arity(3, "tail-: essential <A> <C>")?;
                        let c = line.rational(2)?;
                        if !c.is_positive() {
                            return Err(line.err(
                                line.args[2].0,
                                ParseErrorKind::Syntax("essential tail needs C > 0".into()),
                            ));
                        }
                        TailCertificate::essential(line.rational(1)?, c)
                    }
                    _ => {
                        let col = line.args.first().map_or(line.end_col, |a| a.0);
                        return Err(line.err(col, ParseErrorKind::Syntax("expected `zero` or `essential`".into())));
                    }
                });
            }
            other => return Err(line.err(line.key_col, ParseErrorKind::UnknownKey(other.into()))),
        }
    }

    let Some(prime) = prime else {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            kind: ParseErrorKind::MissingPrime,
        });
    };
    Ok(SeriesDocument {
        prime,
        terms,
        tail_pos: tail_pos.unwrap_or(TailCertificate::zero(TailDirection::Positive)),
        tail_neg: tail_neg.unwrap_or(TailCertificate::zero(TailDirection::Negative)),
    })
}

/// Like [`parse_series_file`] but starting from raw bytes.
pub fn parse_series_bytes(bytes: &[u8]) -> std::result::Result<SeriesDocument, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_series_file(text),
        Err(e) => {
            let good = &bytes[..e.valid_up_to()];
            let line = good.iter().filter(|&&b| b == b'\n').count() + 1;
            let line_start = good.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
            let column = String::from_utf8_lossy(&good[line_start..]).chars().count() + 1;
            Err(ParseError {
                line,
                column,
                kind: ParseErrorKind::Syntax("invalid UTF-8".into()),
            })
        }
    }
}

impl SeriesDocument {
    pub fn to_series(&self) -> Result<LaurentSeries> {
        LaurentSeries::build(
            PrimeContext::new(self.prime)?,
            self.terms.iter().cloned(),
            self.tail_pos.clone(),
            self.tail_neg.clone(),
        )
    }

    /// The document that rebuilds `f`: nonzero entries, plus zero terms at
    /// window edges that border a nontrivial tail.
    pub fn from_series(f: &LaurentSeries) -> Self {
        let mut terms: Vec<(i64, BigRational)> =
            f.entries().iter().map(|(n, c)| (*n, c.clone())).collect();
        if let Some((lo, hi)) = f.window() {
            let mut edges = BTreeSet::new();
            if !f.tail_neg().is_zero() {
                edges.insert(lo);
            }
            if !f.tail_pos().is_zero() {
                edges.insert(hi);
            }
            for n in edges.into_iter().filter(|n| f.coefficient(*n).is_none()) {
                terms.push((n, BigRational::zero()));
            }
        }
        terms.sort_by_key(|t| t.0);
        Self {
            prime: f.ctx().p(),
            terms,
            tail_pos: f.tail_pos().clone(),
            tail_neg: f.tail_neg().clone(),
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "prime: {}", self.prime).unwrap();
        for (n, c) in &self.terms {
            writeln!(out, "term: {n} {c}").unwrap();
        }
        let pos = match &self.tail_pos.kind {
            TailKind::LinearBound { a, b } => format!("linear {a} {b}"),
            _ => "zero".into(),
        };
        let neg = match &self.tail_neg.kind {
            TailKind::EssentialQuadratic { a, c } => format!("essential {a} {c}"),
            _ => "zero".into(),
        };
        writeln!(out, "tail+: {pos}").unwrap();
        writeln!(out, "tail-: {neg}").unwrap();
        out
    }
}
