//! Recursive-descent parser for terms and identities.
//!
//! ```text
//! identity := sum SEP sum            SEP is "≈", "=" or "=="
//! sum      := product ("+" product)*
//! product  := factor ("*"? factor)*
//! factor   := var | "(" sum ")"
//! var      := [a-z] [1-9][0-9]*?
//! ```
//!
//! Whitespace between tokens is ignored. In a run of letters each letter
//! starts a new variable, so `xy` is `x * y` and `x1x2` is `x1 * x2`.

use super::{Identity, Term, Var, Word};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(Var),
    Plus,
    Star,
    Open,
    Close,
    Sep,
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '*' | '·' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::Open));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::Close));
                i += 1;
            }
            '≈' => {
                out.push((pos, Tok::Sep));
                i += 1;
            }
            '=' => {
                out.push((pos, Tok::Sep));
                i += 1;
                if i < chars.len() && chars[i].1 == '=' {
                    i += 1;
                }
            }
            c if c.is_ascii_lowercase() => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().map(|(_, d)| *d).collect();
                let index = if digits.is_empty() {
                    0
                } else {
                    if digits.starts_with('0') {
                        return Err(perr(chars[start].0, "variable index must be a positive integer"));
                    }
                    digits.parse::<u32>().map_err(|_| perr(chars[start].0, "variable index too large"))?
                };
                out.push((pos, Tok::Var(Var::new(c, index))));
            }
            other => return Err(perr(pos, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn sum(&mut self) -> Result<Term> {
        let mut acc = self.product()?;
        while self.peek() == Some(&Tok::Plus) {
            self.at += 1;
            acc = acc.union(&self.product()?);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Term> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = acc.product(&self.factor()?);
                }
                Some(Tok::Var(_)) | Some(Tok::Open) => acc = acc.product(&self.factor()?),
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.at += 1;
                Ok(Term::word(Word::var(v)))
            }
            Some(Tok::Open) => {
                self.at += 1;
                let t = self.sum()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(perr(self.pos(), "expected `)`"));
                }
                self.at += 1;
                Ok(t)
            }
            Some(tok) => Err(perr(pos, format!("expected a variable or `(`, found {tok:?}"))),
            None => Err(perr(pos, "unexpected end of input")),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(perr(0, "empty term"));
    }
    let mut p = Parser { toks, at: 0, end: text.len() };
    let t = p.sum()?;
    if p.at != p.toks.len() {
        return Err(perr(p.pos(), "trailing input"));
    }
    Ok(t)
}

pub fn parse_identity(text: &str) -> Result<Identity> {
    let toks = lex(text)?;
    let seps: Vec<usize> = toks.iter().enumerate().filter(|(_, (_, t))| *t == Tok::Sep).map(|(i, _)| i).collect();
    let split = match seps.as_slice() {
        [one] => *one,
        [] => return Err(perr(text.len(), "missing `=` or `≈`")),
        [_, second, ..] => return Err(perr(toks[*second].0, "more than one separator")),
    };
    let sep_pos = toks[split].0;
    if split == 0 {
        return Err(perr(sep_pos, "empty left-hand side"));
    }
    if split + 1 == toks.len() {
        return Err(perr(text.len(), "empty right-hand side"));
    }
    let rhs_toks = toks[split + 1..].to_vec();
    let lhs_toks = toks[..split].to_vec();
    let mut lp = Parser { toks: lhs_toks, at: 0, end: sep_pos };
    let lhs = lp.sum()?;
    if lp.at != lp.toks.len() {
        return Err(perr(lp.pos(), "trailing input before separator"));
    }
    let mut rp = Parser { toks: rhs_toks, at: 0, end: text.len() };
    let rhs = rp.sum()?;
    if rp.at != rp.toks.len() {
        return Err(perr(rp.pos(), "trailing input"));
    }
    Ok(Identity::new(lhs, rhs))
}

/// One identity per line; blank lines and `#` comments are skipped.
pub fn parse_identities(text: &str) -> Result<Vec<Identity>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then_some((i, body))
        })
        .map(|(i, body)| {
            parse_identity(body).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Format { line: i + 1, msg: format!("column {pos}: {msg}") },
                other => other,
            })
        })
        .collect()
}

pub(crate) fn parse_var(text: &str) -> Result<Var> {
    match lex(text)?.as_slice() {
        [(_, Tok::Var(v))] => Ok(*v),
        _ => Err(perr(0, format!("`{text}` is not a variable"))),
    }
}
