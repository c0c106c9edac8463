//! The `.vee` text format.
//!
//! ```text
//! # comment
//! dim 2
//! vector 1 0 mult 1
//! vector 1/2 3/2 mult ?b
//! lambda2 36
//! ```

use std::fmt;

use num_traits::Zero;
use vee_core::config::{build_configuration, Covector, Entry, VConfiguration};
use vee_core::exactnum::{fmt_rational, parse_rational};
use vee_core::polycon::{SymMult, SymbolicEntry, SymbolicSystem};
use vee_core::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    DimensionMismatch { expected: usize, found: usize },
    ZeroCovector,
    ZeroMultiplicity,
    /// Equal up to sign to the vector on the given line.
    DuplicateCovector { first_line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "{m}"),
            ParseErrorKind::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} coordinates, found {found}")
            }
            ParseErrorKind::ZeroCovector => write!(f, "zero covector"),
            ParseErrorKind::ZeroMultiplicity => write!(f, "zero multiplicity"),
            ParseErrorKind::DuplicateCovector { first_line } => {
                write!(f, "covector repeats the one on line {first_line} up to sign")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileEntry {
    pub coords: Vec<Rational>,
    pub mult: SymMult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigFile {
    pub dim: usize,
    pub entries: Vec<FileEntry>,
    pub lambda2: Option<Rational>,
}

impl ConfigFile {
    pub fn is_symbolic(&self) -> bool {
        self.entries.iter().any(|e| matches!(e.mult, SymMult::Symbol(_)))
    }

    /// `None` if some multiplicity is symbolic.
    pub fn to_configuration(&self) -> Option<vee_core::Result<VConfiguration>> {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| match &e.mult {
                SymMult::Value(q) => Some(Entry::new(Covector(e.coords.clone()), q.clone(), format!("a{}", i + 1))),
                SymMult::Symbol(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(build_configuration(self.dim, entries))
    }

    pub fn to_symbolic(&self) -> vee_core::Result<SymbolicSystem> {
        SymbolicSystem::new(
            self.dim,
            self.entries
                .iter()
                .map(|e| SymbolicEntry {
                    covector: Covector(e.coords.clone()),
                    mult: e.mult.clone(),
                })
                .collect(),
        )
    }

    pub fn from_configuration(cfg: &VConfiguration, lambda2: Option<Rational>) -> Self {
        ConfigFile {
            dim: cfg.dim(),
            entries: cfg
                .entries()
                .iter()
                .map(|e| FileEntry {
                    coords: e.covector.0.clone(),
                    mult: SymMult::Value(e.mult.clone()),
                })
                .collect(),
            lambda2,
        }
    }
}

fn is_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut col = 0;
    let mut byte_start = 0;
    for (b, ch) in line.char_indices() {
        col += 1;
        if ch.is_whitespace() {
            if let Some(c) = start.take() {
                out.push((c, &line[byte_start..b]));
            }
        } else if start.is_none() {
            start = Some(col);
            byte_start = b;
        }
    }
    if let Some(c) = start {
        out.push((c, &line[byte_start..]));
    }
    out
}

pub fn parse_config_file(text: &str) -> Result<ConfigFile, ParseError> {
    let mut dim: Option<usize> = None;
    let mut entries: Vec<FileEntry> = Vec::new();
    let mut entry_lines: Vec<usize> = Vec::new();
    let mut lambda2: Option<Rational> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col0, head)) = toks.first() else { continue };
        let err = |column: usize, kind: ParseErrorKind| ParseError {
            line: line_no,
            column,
            kind,
        };
        let syntax = |column: usize, m: &str| err(column, ParseErrorKind::Syntax(m.to_string()));
        let end_col = content.chars().count() + 1;

        match head {
            "dim" => {
                if dim.is_some() {
                    return Err(syntax(col0, "dim given twice"));
                }
                let Some(&(c, v)) = toks.get(1) else {
                    return Err(syntax(end_col, "expected a dimension after dim"));
                };
                let n: usize = v
                    .parse()
                    .ok()
                    .filter(|n| *n > 0 && v.bytes().all(|b| b.is_ascii_digit()))
                    .ok_or_else(|| syntax(c, "dimension must be a positive integer"))?;
                if let Some(&(c, _)) = toks.get(2) {
                    return Err(syntax(c, "unexpected token after dimension"));
                }
                dim = Some(n);
            }
            _ if dim.is_none() => return Err(syntax(col0, "the first directive must be dim")),
            "vector" => {
                let n = dim.expect("checked above");
                let Some(mult_pos) = toks.iter().position(|t| t.1 == "mult") else {
                    return Err(syntax(end_col, "expected mult"));
                };
                let coords_toks = &toks[1..mult_pos];
                if coords_toks.len() != n {
                    let column = coords_toks.get(n).map(|t| t.0).unwrap_or(toks[mult_pos].0);
                    return Err(err(
                        column,
                        ParseErrorKind::DimensionMismatch {
                            expected: n,
                            found: coords_toks.len(),
                        },
                    ));
                }
                let coords = coords_toks
                    .iter()
                    .map(|&(c, t)| parse_rational(t).ok_or_else(|| syntax(c, &format!("invalid rational {t:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let Some(&(mc, m)) = toks.get(mult_pos + 1) else {
                    return Err(syntax(end_col, "expected a multiplicity after mult"));
                };
                if let Some(&(c, _)) = toks.get(mult_pos + 2) {
                    return Err(syntax(c, "unexpected token after multiplicity"));
                }
                let mult = match m.strip_prefix('?') {
                    Some(sym) if is_symbol(sym) => SymMult::Symbol(sym.to_string()),
                    Some(_) => return Err(syntax(mc, "invalid symbol name")),
                    None => {
                        let q = parse_rational(m).ok_or_else(|| syntax(mc, &format!("invalid rational {m:?}")))?;
                        if q.is_zero() {
                            return Err(err(mc, ParseErrorKind::ZeroMultiplicity));
                        }
                        SymMult::Value(q)
                    }
                };
                let first = coords_toks[0].0;
                if coords.iter().all(Zero::is_zero) {
                    return Err(err(first, ParseErrorKind::ZeroCovector));
                }
                let neg: Vec<Rational> = coords.iter().map(|x| -x).collect();
                if let Some(k) = entries.iter().position(|e| e.coords == coords || e.coords == neg) {
                    return Err(err(first, ParseErrorKind::DuplicateCovector { first_line: entry_lines[k] }));
                }
                entries.push(FileEntry { coords, mult });
                entry_lines.push(line_no);
            }
            "lambda2" => {
                if lambda2.is_some() {
                    return Err(syntax(col0, "lambda2 given twice"));
                }
                let Some(&(c, v)) = toks.get(1) else {
                    return Err(syntax(end_col, "expected a value after lambda2"));
                };
                lambda2 = Some(parse_rational(v).ok_or_else(|| syntax(c, &format!("invalid rational {v:?}")))?);
                if let Some(&(c, _)) = toks.get(2) {
                    return Err(syntax(c, "unexpected token after lambda2 value"));
                }
            }
            other => return Err(syntax(col0, &format!("unknown directive {other:?}"))),
        }
    }
    let Some(dim) = dim else {
        return Err(ParseError {
            line: text.lines().count().max(1),
            column: 1,
            kind: ParseErrorKind::Syntax("missing dim".into()),
        });
    };
    Ok(ConfigFile { dim, entries, lambda2 })
}

pub fn render(file: &ConfigFile) -> String {
    let mut out = format!("dim {}\n", file.dim);
    for e in &file.entries {
        out.push_str("vector");
        for q in &e.coords {
            out.push(' ');
            out.push_str(&fmt_rational(q));
        }
        match &e.mult {
            SymMult::Value(q) => out.push_str(&format!(" mult {}\n", fmt_rational(q))),
            SymMult::Symbol(s) => out.push_str(&format!(" mult ?{s}\n")),
        }
    }
    if let Some(l) = &file.lambda2 {
        out.push_str(&format!("lambda2 {}\n", fmt_rational(l)));
    }
    out
}
