//! The plain-text automaton format.
//!
//! ```text
//! dfa v1
//! states <n>
//! letters <k>
//! table
//! <n targets for letter 0>
//! ...
//! <n targets for letter k-1>
//! ```
//!
//! Tokens may be separated by any run of spaces or tabs and trailing blank
//! lines are ignored. [`serialize_dfa`] writes the canonical form: single
//! spaces and a trailing newline.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::Dfa;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected `{expected}`, found {found:?}")]
    Header { expected: &'static str, found: String },
    #[error("{0} must be a positive integer, found {1:?}")]
    BadCount(&'static str, String),
    #[error("entry {found:?} is not a state index")]
    BadEntry { found: String },
    #[error("entry {entry} out of range [0,{states})")]
    OutOfRange { entry: usize, states: usize },
    #[error("row has {found} entries, expected {expected}")]
    RowLength { found: usize, expected: usize },
    #[error("expected {expected} table rows, found {found}")]
    RowCount { found: usize, expected: usize },
    #[error("unexpected content after the table")]
    TrailingContent,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

pub fn parse_dfa(text: &str) -> Result<Dfa, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |expected: &'static str| {
        lines
            .next()
            .map(|(no, l)| (no, l.split_whitespace().collect::<Vec<_>>()))
            .ok_or_else(|| {
                err(
                    text.lines().count() + 1,
                    ParseErrorKind::Header {
                        expected,
                        found: "end of input".into(),
                    },
                )
            })
    };

    let (no, toks) = next("dfa v1")?;
    if toks != ["dfa", "v1"] {
        return Err(err(
            no,
            ParseErrorKind::Header {
                expected: "dfa v1",
                found: toks.join(" "),
            },
        ));
    }
    let mut count = |keyword: &'static str, expected: &'static str| -> Result<usize, ParseError> {
        let (no, toks) = next(expected)?;
        match toks.as_slice() {
            [kw, value] if *kw == keyword => value
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| err(no, ParseErrorKind::BadCount(keyword, value.to_string()))),
            _ => Err(err(
                no,
                ParseErrorKind::Header {
                    expected,
                    found: toks.join(" "),
                },
            )),
        }
    };
    let n = count("states", "states <n>")?;
    let k = count("letters", "letters <k>")?;
    let (no, toks) = next("table")?;
    if toks != ["table"] {
        return Err(err(
            no,
            ParseErrorKind::Header {
                expected: "table",
                found: toks.join(" "),
            },
        ));
    }

    let mut rows = Vec::with_capacity(k);
    let mut last_line = no;
    for (no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l)).skip(4) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            last_line = no;
            continue;
        }
        if rows.len() == k {
            return Err(err(no, ParseErrorKind::TrailingContent));
        }
        let mut row = Vec::with_capacity(n);
        for tok in &toks {
            let entry: usize = tok.parse().map_err(|_| {
                err(
                    no,
                    ParseErrorKind::BadEntry {
                        found: tok.to_string(),
                    },
                )
            })?;
            if entry >= n {
                return Err(err(no, ParseErrorKind::OutOfRange { entry, states: n }));
            }
            row.push(entry);
        }
        if row.len() != n {
            return Err(err(
                no,
                ParseErrorKind::RowLength {
                    found: row.len(),
                    expected: n,
                },
            ));
        }
        rows.push(row);
        last_line = no;
    }
    if rows.len() != k {
        return Err(err(
            last_line + 1,
            ParseErrorKind::RowCount {
                found: rows.len(),
                expected: k,
            },
        ));
    }
    Ok(Dfa::from_rows(n, rows).expect("validated above"))
}

pub fn serialize_dfa(dfa: &Dfa) -> String {
    let mut out = String::new();
    writeln!(out, "dfa v1").unwrap();
    writeln!(out, "states {}", dfa.num_states()).unwrap();
    writeln!(out, "letters {}", dfa.num_letters()).unwrap();
    writeln!(out, "table").unwrap();
    for row in dfa.rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        writeln!(out, "{}", cells.join(" ")).unwrap();
    }
    out
}
