//! Recursive-descent parser for goal formulas.
//!
//! Precedence from tightest: `!` and modalities, `&`, `|`, `->`, `<->`.
//! `&` and `|` associate to the left, `->` and `<->` to the right.

use thiserror::Error;

use super::formula::Formula;
use super::signature::{PlayerId, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown atom {name:?} at offset {offset}")]
    UnknownAtom { name: String, offset: usize },
    #[error("unknown player {index} at offset {offset}")]
    UnknownPlayer { index: u64, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownAtom { offset, .. }
            | ParseError::UnknownPlayer { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Modal(ModalKind, u64),
    Top,
    Bottom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ModalKind {
    K,
    KHat,
    Kw,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("atom {s:?}"),
        Tok::Modal(..) => "modality".into(),
        Tok::Top => "'T'".into(),
        Tok::Bottom => "'F'".into(),
        Tok::Not => "'!'".into(),
        Tok::And => "'&'".into(),
        Tok::Or => "'|'".into(),
        Tok::Implies => "'->'".into(),
        Tok::Iff => "'<->'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let syntax = |offset: usize, message: String| ParseError::Syntax { offset, message };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => {
                out.push((Tok::Not, start));
                i += 1;
            }
            b'&' => {
                out.push((Tok::And, start));
                i += 1;
            }
            b'|' => {
                out.push((Tok::Or, start));
                i += 1;
            }
            b'(' => {
                out.push((Tok::LParen, start));
                i += 1;
            }
            b')' => {
                out.push((Tok::RParen, start));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    out.push((Tok::Implies, start));
                    i += 2;
                } else {
                    return Err(syntax(start, "expected '->'".into()));
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    out.push((Tok::Iff, start));
                    i += 3;
                } else {
                    return Err(syntax(start, "expected '<->'".into()));
                }
            }
            b'a'..=b'z' => {
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase()
                        || bytes[i].is_ascii_digit()
                        || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            b'T' | b'F' => {
                i += 1;
                if i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    return Err(syntax(start, "unexpected identifier".into()));
                }
                out.push((if c == b'T' { Tok::Top } else { Tok::Bottom }, start));
            }
            b'K' => {
                i += 1;
                let kind = match bytes.get(i) {
                    Some(b'h') => {
                        i += 1;
                        ModalKind::KHat
                    }
                    Some(b'w') => {
                        i += 1;
                        ModalKind::Kw
                    }
                    _ => ModalKind::K,
                };
                let digits = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits == i {
                    return Err(syntax(i, "expected player index after modality".into()));
                }
                if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    return Err(syntax(i, "expected space after modality".into()));
                }
                let index: u64 = text[digits..i]
                    .parse()
                    .map_err(|_| syntax(digits, "player index too large".into()))?;
                out.push((Tok::Modal(kind, index), start));
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character {ch:?}")));
            }
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {wanted}, found {}", describe(self.peek())),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implies()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Modal(kind, index) => {
                if index == 0 || index > self.sig.n() as u64 {
                    return Err(ParseError::UnknownPlayer { index, offset });
                }
                let p = PlayerId(index as u16);
                let body = self.unary()?;
                Ok(match kind {
                    ModalKind::K => Formula::k(p, body),
                    ModalKind::KHat => Formula::khat(p, body),
                    ModalKind::Kw => Formula::kw(p, body),
                })
            }
            Tok::Top => Ok(Formula::Top),
            Tok::Bottom => Ok(Formula::Bottom),
            Tok::Ident(name) => match self.sig.lookup(&name) {
                Some(v) => Ok(Formula::Atom(v)),
                None => Err(ParseError::UnknownAtom { name, offset }),
            },
            Tok::LParen => {
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("')'"));
                }
                self.bump();
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                offset,
                message: format!("expected a formula, found {}", describe(&other)),
            }),
        }
    }
}

/// Parses `text` against the variables and players of `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, sig };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}
