//! Plain-text Cayley table format.
//!
//! ```text
//! # comments run to end of line; blank lines are ignored
//! 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! ```
//!
//! The first content line holds the order `n`; each of the next `n` content
//! lines holds `n` whitespace-separated 0-based entries.

use sha2::{Digest, Sha256};

use crate::error::{LoopError, Result};
use crate::table::{validate, MagmaTable, Validation};

/// A parsed table together with its validation outcome.
#[derive(Clone, Debug)]
pub struct ParsedTable {
    pub table: MagmaTable,
    pub validation: Validation,
}

/// Parses the text format. Range and shape errors are fatal; a table that is
/// well formed but not a loop is returned with its classification.
pub fn parse(text: &str) -> Result<ParsedTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split('#').next().unwrap_or("")))
        .filter(|(_, line)| !line.trim().is_empty());

    let (header_line, header) = lines.next().ok_or(LoopError::Parse {
        line: 1,
        column: 1,
        message: "empty input; expected the table order".into(),
    })?;
    let tokens = tokenize(header);
    if tokens.len() != 1 {
        let (column, _) = tokens.get(1).copied().unwrap_or((1, ""));
        return Err(LoopError::Parse {
            line: header_line,
            column,
            message: "header must contain only the table order".into(),
        });
    }
    let (column, tok) = tokens[0];
    let order: usize = tok.parse().map_err(|_| LoopError::Parse {
        line: header_line,
        column,
        message: format!("expected a non-negative integer order, found `{tok}`"),
    })?;
    if order == 0 {
        return Err(LoopError::Parse {
            line: header_line,
            column,
            message: "order must be at least 1".into(),
        });
    }

    let mut products = Vec::with_capacity(order * order);
    let mut last_line = header_line;
    for row in 0..order {
        let (line_no, line) = lines.next().ok_or(LoopError::Parse {
            line: last_line + 1,
            column: 1,
            message: format!("expected {order} rows, found {row}"),
        })?;
        last_line = line_no;
        let tokens = tokenize(line);
        if tokens.len() != order {
            let column = tokens.get(order).map_or(line.len() + 1, |t| t.0);
            return Err(LoopError::Parse {
                line: line_no,
                column,
                message: format!("row {row} has {} entries, expected {order}", tokens.len()),
            });
        }
        for (column, tok) in tokens {
            let v: usize = tok.parse().map_err(|_| LoopError::Parse {
                line: line_no,
                column,
                message: format!("expected a non-negative integer, found `{tok}`"),
            })?;
            if v >= order {
                return Err(LoopError::Parse {
                    line: line_no,
                    column,
                    message: format!("entry {v} is out of range 0..{order}"),
                });
            }
            products.push(v);
        }
    }
    if let Some((line_no, line)) = lines.next() {
        let column = line.len() - line.trim_start().len() + 1;
        return Err(LoopError::Parse {
            line: line_no,
            column,
            message: format!("unexpected content after {order} rows"),
        });
    }

    let table = MagmaTable::new(order, products)?;
    let validation = validate(table.clone());
    Ok(ParsedTable { table, validation })
}

/// 1-based column of each whitespace-separated token.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Canonical emission: order line, then one line per row, single spaces,
/// trailing newline.
pub fn emit(table: &MagmaTable) -> String {
    let mut s = format!("{}\n", table.order());
    for row in table.rows() {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
