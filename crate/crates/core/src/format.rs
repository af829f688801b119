//! Reading and writing ice quivers.
//!
//! Text layout: a header line `n m`, then `n` rows of `n + m` integers (the
//! rows of `[B | C]`). Blank lines are ignored and `#` starts a comment.
//!
//! JSON layout: `{"n": .., "m": .., "b": [[..]], "c": [[..]]}` where `b` is
//! `n x n` and `c` is `n x m`. Entries beyond the 53-bit safe range are
//! written as decimal strings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json_int;
use crate::matrix::IntMatrix;
use crate::quiver::{ExtendedQuiver, QuiverMatrix};
use crate::sequence::MutationSequence;

#[derive(Serialize, Deserialize)]
pub struct QuiverDoc {
    pub n: usize,
    pub m: usize,
    #[serde(with = "json_int::matrix")]
    pub b: Vec<Vec<BigInt>>,
    #[serde(with = "json_int::matrix")]
    pub c: Vec<Vec<BigInt>>,
}

impl QuiverDoc {
    pub fn from_quiver(q: &ExtendedQuiver) -> Self {
        Self {
            n: q.n(),
            m: q.m(),
            b: q.mutable_part().matrix().to_rows(),
            c: q.c_matrix().to_rows(),
        }
    }

    pub fn into_quiver(self) -> Result<ExtendedQuiver> {
        if self.b.len() != self.n || self.c.len() != self.n {
            return Err(Error::Dimension(format!(
                "expected {} rows in b and c, found {} and {}",
                self.n,
                self.b.len(),
                self.c.len()
            )));
        }
        let (n, m) = (self.n, self.m);
        let shape_err = || Error::Dimension(format!("b must be {n}x{n} and c {n}x{m}"));
        let b = IntMatrix::from_rows(self.b, n).ok_or_else(shape_err)?;
        let c = IntMatrix::from_rows(self.c, m).ok_or_else(shape_err)?;
        ExtendedQuiver::new(QuiverMatrix::new(b)?, c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuiverFormat {
    Json,
    Text,
}

/// Parses either layout, picking JSON when the first non-blank character
/// outside comments is `{`.
pub fn parse_quiver(input: &str) -> Result<ExtendedQuiver> {
    match detect(input) {
        QuiverFormat::Json => parse_json(input),
        QuiverFormat::Text => parse_text(input),
    }
}

pub fn detect(input: &str) -> QuiverFormat {
    let first = input
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    match first {
        Some(l) if l.starts_with('{') => QuiverFormat::Json,
        _ => QuiverFormat::Text,
    }
}

pub fn parse_json(input: &str) -> Result<ExtendedQuiver> {
    let doc: QuiverDoc = serde_json::from_str(input).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_quiver()
}

pub fn to_json(q: &ExtendedQuiver) -> String {
    serde_json::to_string(&QuiverDoc::from_quiver(q)).expect("quiver documents always serialize")
}

pub fn to_json_pretty(q: &ExtendedQuiver) -> String {
    serde_json::to_string_pretty(&QuiverDoc::from_quiver(q))
        .expect("quiver documents always serialize")
}

struct Token<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

fn tokens(input: &str) -> impl Iterator<Item = Vec<Token<'_>>> {
    input.lines().enumerate().filter_map(|(ln, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (i, ch) in body
            .char_indices()
            .chain(std::iter::once((body.len(), ' ')))
        {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    toks.push(Token {
                        line: ln + 1,
                        column: body[..s].chars().count() + 1,
                        text: &body[s..i],
                    });
                    start = None;
                }
                _ => {}
            }
        }
        (!toks.is_empty()).then_some(toks)
    })
}

fn parse_err(t: &Token<'_>, message: impl Into<String>) -> Error {
    Error::Parse {
        line: t.line,
        column: t.column,
        message: message.into(),
    }
}

fn int<T: std::str::FromStr>(t: &Token<'_>, what: &str) -> Result<T> {
    t.text
        .parse()
        .map_err(|_| parse_err(t, format!("expected {what}, found {:?}", t.text)))
}

pub fn parse_text(input: &str) -> Result<ExtendedQuiver> {
    let mut lines = tokens(input);
    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "missing `n m` header".into(),
    })?;
    if header.len() != 2 {
        return Err(parse_err(&header[0], "header must be exactly `n m`"));
    }
    let n: usize = int(&header[0], "a vertex count")?;
    let m: usize = int(&header[1], "a frozen vertex count")?;
    let mut b = IntMatrix::zeros(n, n);
    let mut c = IntMatrix::zeros(n, m);
    let mut last_line = header[0].line;
    for i in 0..n {
        let row = lines.next().ok_or_else(|| Error::Parse {
            line: last_line + 1,
            column: 1,
            message: format!("expected {n} matrix rows, found {i}"),
        })?;
        last_line = row[0].line;
        if row.len() != n + m {
            let at = row.get(n + m).unwrap_or(&row[row.len() - 1]);
            return Err(parse_err(
                at,
                format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n + m
                ),
            ));
        }
        for (j, t) in row.iter().enumerate() {
            let x: BigInt = int(t, "an integer")?;
            if j < n {
                b[(i, j)] = x;
            } else {
                c[(i, j - n)] = x;
            }
        }
    }
    if let Some(extra) = lines.next() {
        return Err(parse_err(&extra[0], "unexpected data after the matrix"));
    }
    ExtendedQuiver::new(QuiverMatrix::new(b)?, c)
}

pub fn to_text(q: &ExtendedQuiver) -> String {
    let mut out = format!("{} {}\n", q.n(), q.m());
    for i in 0..q.n() {
        let row: Vec<String> = q
            .mutable_part()
            .matrix()
            .row(i)
            .iter()
            .chain(q.c_matrix().row(i))
            .map(|x| x.to_string())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses `1,2,3`, `[1, 2, 3]` or `1 2 3`; the empty string is the empty
/// sequence.
pub fn parse_sequence(input: &str) -> Result<MutationSequence> {
    let trimmed = input.trim().trim_start_matches('[').trim_end_matches(']');
    let mut labels = Vec::new();
    let mut column = 1;
    for part in trimmed.split(|c: char| c == ',' || c.is_whitespace()) {
        if !part.is_empty() {
            let label = part.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                column,
                message: format!("expected a vertex label, found {part:?}"),
            })?;
            labels.push(label);
        }
        column += part.chars().count() + 1;
    }
    MutationSequence::from_labels(&labels)
}
