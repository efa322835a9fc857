//! Text form of replication rules.
//!
//! ```text
//! rule  := ident ("," ident)* "->" combo ("," combo)*
//! combo := ["+" | "-"] term (("+" | "-") term)*
//! term  := [integer] ident
//! ```
//!
//! Identifiers are `[a-z]+`; whitespace is ignored between tokens. The
//! combos on the right are dealt out in order, `combos / arity` per new
//! string, so `a,b -> a,b,3a,2a+b` makes `a' = (a, b)` and `b' = (3a, 2a+b)`.

use super::{ReplicationRule, Segment};
use crate::RuleError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Comma,
    Arrow,
}

fn syntax(pos: usize, message: impl Into<String>) -> RuleError {
    RuleError::Syntax {
        pos,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, RuleError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let c = bytes[i];
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'a'..=b'z' => {
                while i < bytes.len() && bytes[i].is_ascii_lowercase() {
                    i += 1;
                }
                Token::Ident(text[start..i].to_string())
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = text[start..i]
                    .parse()
                    .map_err(|_| syntax(start, "coefficient out of range"))?;
                Token::Int(value)
            }
            b'+' => {
                i += 1;
                Token::Plus
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Token::Arrow
            }
            b'-' => {
                i += 1;
                Token::Minus
            }
            b',' => {
                i += 1;
                Token::Comma
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        tokens.push((start, token));
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    next: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.next).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.next).map_or(self.end, |&(p, _)| p)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let tok = self.tokens.get(self.next).cloned();
        self.next += 1;
        tok
    }

    fn ident(&mut self) -> Result<(usize, String), RuleError> {
        match self.bump() {
            Some((pos, Token::Ident(name))) => Ok((pos, name)),
            Some((pos, _)) => Err(syntax(pos, "expected identifier")),
            None => Err(syntax(self.end, "expected identifier, found end of input")),
        }
    }

    fn header(&mut self) -> Result<Vec<String>, RuleError> {
        let mut names: Vec<String> = Vec::new();
        loop {
            let (pos, name) = self.ident()?;
            if names.contains(&name) {
                return Err(syntax(pos, format!("duplicate identifier `{name}`")));
            }
            names.push(name);
            match self.bump() {
                Some((_, Token::Comma)) => continue,
                Some((_, Token::Arrow)) => return Ok(names),
                Some((pos, _)) => return Err(syntax(pos, "expected `,` or `->`")),
                None => return Err(syntax(self.end, "expected `->`, found end of input")),
            }
        }
    }

    fn combo(&mut self, names: &[String]) -> Result<Segment, RuleError> {
        let mut coefs = [0i64; 2];
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    1
                }
                Some(Token::Minus) => {
                    self.bump();
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let term_pos = self.pos();
            let magnitude = match self.peek() {
                Some(Token::Int(v)) => {
                    let v = *v;
                    self.bump();
                    v
                }
                _ => 1,
            };
            let (pos, name) = self.ident()?;
            let slot = names
                .iter()
                .position(|n| *n == name)
                .ok_or(RuleError::UnknownIdentifier { name, pos })?;
            coefs[slot] = magnitude
                .checked_mul(sign)
                .and_then(|c| coefs[slot].checked_add(c))
                .ok_or_else(|| syntax(term_pos, "coefficient out of range"))?;
        }
        Ok(Segment::new(coefs[0], coefs[1]))
    }

    fn body(&mut self, names: &[String]) -> Result<Vec<Segment>, RuleError> {
        let mut segments = vec![self.combo(names)?];
        loop {
            match self.bump() {
                Some((_, Token::Comma)) => segments.push(self.combo(names)?),
                Some((pos, _)) => {
                    return Err(syntax(pos, "expected `,`, `+`, `-` or end of input"))
                }
                None => return Ok(segments),
            }
        }
    }
}

/// Parses a rule such as `a,b -> a,b,3a,2a+b` and attaches `seeds`, one
/// string per identifier on the left.
pub fn parse_rule(text: &str, seeds: &[Vec<i64>]) -> Result<ReplicationRule, RuleError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        next: 0,
        end: text.len(),
    };
    let names = parser.header()?;
    if names.len() > 2 {
        return Err(RuleError::ArityMismatch(format!(
            "a rule carries 1 or 2 strings, got {}",
            names.len()
        )));
    }
    let segments = parser.body(&names)?;
    let arity = names.len();
    if segments.len() % arity != 0 {
        return Err(RuleError::ArityMismatch(format!(
            "{} segments cannot be split evenly across {arity} outputs",
            segments.len()
        )));
    }
    let per_output = segments.len() / arity;
    let outputs = segments
        .chunks(per_output)
        .map(<[Segment]>::to_vec)
        .collect();
    ReplicationRule::new(arity, outputs, seeds.to_vec())
}
