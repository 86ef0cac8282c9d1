//! The `.chc` text format for complexes and the companion chains format.
//!
//! ```text
//! # comment
//! complex NAME
//! dim MAX
//! cell NAME dim=D [class=TAG] [type=first|second] [mult=M]
//! boundary NAME = NAME + NAME + ...
//! boundary NAME = 0
//! ```
//!
//! A cell without a `boundary` line has zero boundary. Terms repeated on one
//! boundary line cancel in pairs. A chains file holds one chain per line:
//!
//! ```text
//! degree D : NAME + NAME + ...
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Cell, CellType, Chain, ChainComplex};
use crate::gf2::Gf2Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    };
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in body.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                out.push(Token {
                    text: &body[b..byte],
                    column: c + 1,
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        out.push(Token {
            text: &body[b..],
            column: c + 1,
        });
    }
    out
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct LineCx {
    line: usize,
    end_column: usize,
}

impl LineCx {
    fn err(&self, column: usize, reason: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            reason: reason.into(),
        }
    }

    fn at(&self, t: &Token<'_>, reason: impl Into<String>) -> ParseError {
        self.err(t.column, reason)
    }

    fn missing(&self, what: &str) -> ParseError {
        self.err(self.end_column, format!("expected {what}"))
    }

    fn name(&self, t: &Token<'_>) -> Result<String, ParseError> {
        if is_identifier(t.text) {
            Ok(t.text.to_string())
        } else {
            Err(self.at(t, format!("invalid name {:?}", t.text)))
        }
    }

    fn number<T: std::str::FromStr>(&self, t: &Token<'_>, s: &str) -> Result<T, ParseError> {
        s.parse()
            .map_err(|_| self.at(t, format!("expected a non-negative integer, found {s:?}")))
    }
}

/// Parses `NAME + NAME + ...` (or a lone `0`) into names with their tokens.
fn sum_terms<'a>(cx: &LineCx, toks: &[Token<'a>]) -> Result<Vec<Token<'a>>, ParseError> {
    if toks.is_empty() {
        return Err(cx.missing("a sum of cell names or 0"));
    }
    if toks.len() == 1 && toks[0].text == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (k, t) in toks.iter().enumerate() {
        if k % 2 == 1 {
            if t.text != "+" {
                return Err(cx.at(t, format!("expected '+', found {:?}", t.text)));
            }
        } else {
            cx.name(t)?;
            out.push(*t);
        }
    }
    if toks.len().is_multiple_of(2) {
        return Err(cx.missing("a cell name after '+'"));
    }
    Ok(out)
}

/// Parses a `.chc` document.
pub fn parse_chc(text: &str) -> Result<ChainComplex, ParseError> {
    let mut name: Option<String> = None;
    let mut max: Option<usize> = None;
    let mut cells: Vec<Vec<Cell>> = Vec::new();
    let mut index: HashMap<String, (usize, usize)> = HashMap::new();
    let mut entries: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut has_boundary: HashSet<String> = HashSet::new();
    let mut last_line = 0;

    for (n, raw) in text.lines().enumerate() {
        let cx = LineCx {
            line: n + 1,
            end_column: raw.chars().count() + 1,
        };
        last_line = n + 1;
        let toks = tokens(raw);
        let Some(head) = toks.first() else { continue };
        match head.text {
            "complex" => {
                if name.is_some() {
                    return Err(cx.at(head, "duplicate complex line"));
                }
                match toks.as_slice() {
                    [_, t] => name = Some(cx.name(t)?),
                    [_] => return Err(cx.missing("a complex name")),
                    [_, _, t, ..] => return Err(cx.at(t, "unexpected token")),
                    [] => unreachable!(),
                }
            }
            "dim" => {
                if name.is_none() {
                    return Err(cx.at(head, "dim line before complex line"));
                }
                if max.is_some() {
                    return Err(cx.at(head, "duplicate dim line"));
                }
                match toks.as_slice() {
                    [_, t] => {
                        let m: usize = cx.number(t, t.text)?;
                        max = Some(m);
                        cells = vec![Vec::new(); m + 1];
                        entries = vec![Vec::new(); m];
                    }
                    [_] => return Err(cx.missing("the maximum degree")),
                    [_, _, t, ..] => return Err(cx.at(t, "unexpected token")),
                    [] => unreachable!(),
                }
            }
            "cell" => {
                let Some(max) = max else {
                    return Err(cx.at(head, "cell line before the complex and dim lines"));
                };
                let Some(nt) = toks.get(1) else {
                    return Err(cx.missing("a cell name"));
                };
                let cname = cx.name(nt)?;
                if index.contains_key(&cname) {
                    return Err(cx.at(nt, format!("duplicate cell name {cname}")));
                }
                let mut degree = None;
                let mut class = None;
                let mut ty = None;
                let mut mult = None;
                for t in &toks[2..] {
                    let Some((key, value)) = t.text.split_once('=') else {
                        return Err(cx.at(t, format!("expected key=value, found {:?}", t.text)));
                    };
                    let dup = match key {
                        "dim" => degree.replace(cx.number::<usize>(t, value)?).is_some(),
                        "class" => {
                            if !is_identifier(value) {
                                return Err(cx.at(t, format!("invalid class tag {value:?}")));
                            }
                            class.replace(value.to_string()).is_some()
                        }
                        "type" => {
                            let v = match value {
                                "first" => CellType::First,
                                "second" => CellType::Second,
                                _ => {
                                    return Err(cx.at(
                                        t,
                                        format!("type must be first or second, found {value:?}"),
                                    ))
                                }
                            };
                            ty.replace(v).is_some()
                        }
                        "mult" => {
                            let m: u8 = cx.number(t, value)?;
                            if !(3..=6).contains(&m) {
                                return Err(cx.at(t, format!("multiplicity {m} is not in 3..6")));
                            }
                            mult.replace(m).is_some()
                        }
                        _ => return Err(cx.at(t, format!("unknown attribute {key:?}"))),
                    };
                    if dup {
                        return Err(cx.at(t, format!("attribute {key} given twice")));
                    }
                }
                let Some(degree) = degree else {
                    return Err(cx.missing("dim=D"));
                };
                if degree > max {
                    return Err(cx.at(nt, format!("cell degree {degree} exceeds dim {max}")));
                }
                let cell = Cell {
                    name: cname.clone(),
                    degree,
                    class_tag: class,
                    type_tag: ty.unwrap_or(CellType::First),
                    multiplicity: mult,
                };
                index.insert(cname, (degree, cells[degree].len()));
                cells[degree].push(cell);
            }
            "boundary" => {
                let Some(nt) = toks.get(1) else {
                    return Err(cx.missing("a cell name"));
                };
                let cname = cx.name(nt)?;
                let Some(&(d, col)) = index.get(&cname) else {
                    return Err(cx.at(nt, format!("boundary of undeclared cell {cname}")));
                };
                if !has_boundary.insert(cname.clone()) {
                    return Err(cx.at(nt, format!("second boundary line for {cname}")));
                }
                match toks.get(2) {
                    Some(t) if t.text == "=" => {}
                    Some(t) => return Err(cx.at(t, format!("expected '=', found {:?}", t.text))),
                    None => return Err(cx.missing("'='")),
                }
                let terms = sum_terms(&cx, &toks[3..])?;
                if d == 0 && !terms.is_empty() {
                    return Err(cx.at(&terms[0], format!("{cname} has degree 0 and no boundary")));
                }
                for t in terms {
                    let Some(&(td, row)) = index.get(t.text) else {
                        return Err(cx.at(&t, format!("unknown cell {}", t.text)));
                    };
                    if td + 1 != d {
                        return Err(cx.at(
                            &t,
                            format!(
                                "{} has degree {td}, but the boundary of {cname} needs degree {}",
                                t.text,
                                d - 1
                            ),
                        ));
                    }
                    entries[d - 1].push((row, col));
                }
            }
            other => return Err(cx.at(head, format!("unknown directive {other:?}"))),
        }
    }

    let end = ParseError {
        line: last_line.max(1),
        column: 1,
        reason: String::new(),
    };
    let Some(name) = name else {
        return Err(ParseError {
            reason: "missing complex line".into(),
            ..end
        });
    };
    let Some(max) = max else {
        return Err(ParseError {
            reason: "missing dim line".into(),
            ..end
        });
    };
    let boundaries = (1..=max)
        .map(|d| {
            Gf2Matrix::from_triples(
                cells[d - 1].len(),
                cells[d].len(),
                entries[d - 1].iter().map(|&(r, c)| (r, c, 1)),
            )
        })
        .collect();
    Ok(ChainComplex::new(name, cells, boundaries).expect("parser keeps the complex consistent"))
}

/// Canonical text: header, cells by degree in declaration order, then one
/// boundary line per positive-degree cell in the same order.
pub fn serialize_chc(x: &ChainComplex) -> String {
    let mut s = String::new();
    writeln!(s, "complex {}", x.name()).unwrap();
    writeln!(s, "dim {}", x.max_degree()).unwrap();
    for c in x.all_cells() {
        write!(s, "cell {} dim={}", c.name, c.degree).unwrap();
        if let Some(t) = &c.class_tag {
            write!(s, " class={t}").unwrap();
        }
        write!(s, " type={}", c.type_tag).unwrap();
        if let Some(m) = c.multiplicity {
            write!(s, " mult={m}").unwrap();
        }
        s.push('\n');
    }
    for c in x.all_cells().filter(|c| c.degree > 0) {
        let terms = x.boundary_of_cell(&c.name).expect("cell is in the complex");
        let rhs = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        writeln!(s, "boundary {} = {rhs}", c.name).unwrap();
    }
    s
}

/// A chain read from a chains file, with its line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainEntry {
    pub line: usize,
    pub chain: Chain,
}

impl fmt::Display for ChainEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {} : {}", self.chain.degree, self.chain)
    }
}

/// Parses a chains file. Names are checked for syntax only; membership in a
/// complex is checked when the chains are used.
pub fn parse_chains(text: &str) -> Result<Vec<ChainEntry>, ParseError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let cx = LineCx {
            line: n + 1,
            end_column: raw.chars().count() + 1,
        };
        let toks = tokens(raw);
        let Some(head) = toks.first() else { continue };
        if head.text != "degree" {
            return Err(cx.at(head, format!("expected 'degree', found {:?}", head.text)));
        }
        let Some(dt) = toks.get(1) else {
            return Err(cx.missing("a degree"));
        };
        let degree: usize = cx.number(dt, dt.text)?;
        match toks.get(2) {
            Some(t) if t.text == ":" => {}
            Some(t) => return Err(cx.at(t, format!("expected ':', found {:?}", t.text))),
            None => return Err(cx.missing("':'")),
        }
        let terms = sum_terms(&cx, &toks[3..])?;
        out.push(ChainEntry {
            line: n + 1,
            chain: Chain::new(degree, terms.iter().map(|t| t.text)),
        });
    }
    Ok(out)
}
