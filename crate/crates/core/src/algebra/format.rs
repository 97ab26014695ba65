//! Plain-text algebra files.
//!
//! ```text
//! name S58
//! order 3
//! elements 1 2 3
//! add
//! 1 1 3
//! 1 2 3
//! 3 3 3
//! mul
//! 3 3 3
//! 2 2 2
//! 3 3 3
//! ```
//!
//! Rows and columns follow the element order. `name` and `elements` are
//! optional; without `elements`, row `i` is labeled by the diagonal entry
//! `add[i][i]` (addition is idempotent). Several algebras may share a file;
//! each block starts at a `name` or `order` line. `#` starts a comment.

use std::collections::HashMap;

use super::FiniteAlgebra;
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

#[derive(Default)]
struct Block {
    start: usize,
    name: Option<String>,
    order: Option<usize>,
    elements: Option<Vec<String>>,
    add: Vec<(usize, Vec<String>)>,
    mul: Vec<(usize, Vec<String>)>,
}

/// Parses every algebra in the text. The results are not validated.
pub fn parse_all(text: &str) -> Result<Vec<FiniteAlgebra>> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut section: Option<&str> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or_default();
        let rest: Vec<String> = words.map(str::to_string).collect();
        let opens_block = match head {
            "name" => true,
            "order" => blocks.last().is_none_or(|b| b.order.is_some()),
            _ => false,
        };
        if opens_block {
            blocks.push(Block { start: line_no, ..Block::default() });
            section = None;
        }
        let block = blocks.last_mut().ok_or_else(|| err(line_no, "expected `name` or `order` before tables"))?;
        match head {
            "name" => {
                if rest.is_empty() {
                    return Err(err(line_no, "`name` needs a label"));
                }
                block.name = Some(rest.join(" "));
            }
            "order" => {
                let n = rest
                    .first()
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| err(line_no, "`order` needs a positive integer"))?;
                block.order = Some(n);
            }
            "elements" => block.elements = Some(rest),
            "add" | "mul" if rest.is_empty() => section = Some(if head == "add" { "add" } else { "mul" }),
            _ => {
                let row: Vec<String> = line.split_whitespace().map(str::to_string).collect();
                match section {
                    Some("add") => block.add.push((line_no, row)),
                    Some("mul") => block.mul.push((line_no, row)),
                    _ => return Err(err(line_no, format!("unexpected line `{line}`"))),
                }
            }
        }
    }
    blocks.into_iter().map(build).collect()
}

/// Parses a text holding exactly one algebra.
pub fn parse(text: &str) -> Result<FiniteAlgebra> {
    let mut all = parse_all(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => Err(err(1, "no algebra found")),
        k => Err(err(1, format!("expected one algebra, found {k}"))),
    }
}

fn build(block: Block) -> Result<FiniteAlgebra> {
    let n = block.order.ok_or_else(|| err(block.start, "missing `order`"))?;
    for (which, rows) in [("add", &block.add), ("mul", &block.mul)] {
        if rows.len() != n {
            return Err(err(block.start, format!("{which} block has {} rows, expected {n}", rows.len())));
        }
        for (line, row) in rows {
            if row.len() != n {
                return Err(err(*line, format!("row has {} entries, expected {n}", row.len())));
            }
        }
    }
    let labels: Vec<String> = match block.elements {
        Some(l) => {
            if l.len() != n {
                return Err(err(block.start, format!("`elements` lists {} labels, expected {n}", l.len())));
            }
            l
        }
        None => (0..n).map(|i| block.add[i].1[i].clone()).collect(),
    };
    let mut index = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(err(block.start, format!("label `{l}` repeated; add an `elements` line to fix the order")));
        }
    }
    let flatten = |rows: &[(usize, Vec<String>)]| -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(n * n);
        for (line, row) in rows {
            for entry in row {
                let i = index.get(entry).ok_or_else(|| err(*line, format!("unknown element `{entry}`")))?;
                out.push(*i as u8);
            }
        }
        Ok(out)
    };
    let add = flatten(&block.add)?;
    let mul = flatten(&block.mul)?;
    let mut a =
        FiniteAlgebra::from_flat(n, add, mul).map_err(|e| err(block.start, e.to_string()))?.with_labels(labels)?;
    if let Some(name) = block.name {
        a = a.with_name(name);
    }
    Ok(a)
}

/// Writes an algebra in the text format, always with an `elements` line.
pub fn to_text(a: &FiniteAlgebra) -> String {
    let n = a.order();
    let mut out = String::new();
    if let Some(name) = a.name() {
        out.push_str(&format!("name {name}\n"));
    }
    out.push_str(&format!("order {n}\n"));
    let labels: Vec<String> = (0..n).map(|i| a.label(i)).collect();
    out.push_str(&format!("elements {}\n", labels.join(" ")));
    for (which, op) in [("add", 0), ("mul", 1)] {
        out.push_str(which);
        out.push('\n');
        for x in 0..n {
            let row: Vec<String> =
                (0..n).map(|y| labels[if op == 0 { a.add(x, y) } else { a.mul(x, y) }].clone()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}
