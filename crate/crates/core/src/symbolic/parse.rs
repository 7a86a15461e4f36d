//! Text syntax for terms.
//!
//! ```text
//! sum     := ['-'] product (('+' | '-') product)*
//! product := factor (['.'] factor)*
//! factor  := primary '*'*
//! primary := symbol | 's' | 'k' | integer | '1_' space | '(' sum ')'
//! ```
//!
//! Symbols are `a b c d e` and the tilde copies written `at`, `a~` or `ã`
//! (likewise `bt`, `dt`, `et`); `c~` is `c`. An untyped integer stands for
//! that multiple of the identity of whatever space the context requires.

use super::scalar::Scalar;
use super::term::{Letter, Signature, Space, Sym, Term};
use super::SymbolicError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Dot,
    LParen,
    RParen,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '~' || c == '\u{303}'
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SymbolicError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '.' | '·' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '_' {
                    while i < chars.len() && is_ident_char(chars[i]) {
                        i += 1;
                    }
                    out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                    continue;
                }
                let digits: String = chars[start..i].iter().collect();
                let value = digits.parse().map_err(|_| SymbolicError::Parse {
                    position: start,
                    message: format!("integer literal {digits} out of range"),
                })?;
                out.push((start, Tok::Int(value)));
                continue;
            }
            c if is_ident_char(c) => {
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(SymbolicError::Parse {
                    position: start,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

fn letter(name: &str) -> Option<Letter> {
    let base = name
        .strip_suffix('~')
        .or_else(|| name.strip_suffix('\u{303}'))
        .or_else(|| name.strip_suffix('t').filter(|b| b.len() == 1));
    let (base, tilde) = match base {
        Some(b) => (b, true),
        None => match name {
            "ã" => ("a", true),
            "ẽ" => ("e", true),
            _ => (name, false),
        },
    };
    Some(match (base, tilde) {
        ("a", false) => Letter::A,
        ("b", false) => Letter::B,
        ("c", _) => Letter::C,
        ("d", false) => Letter::D,
        ("e", false) => Letter::E,
        ("a", true) => Letter::At,
        ("b", true) => Letter::Bt,
        ("d", true) => Letter::Dt,
        ("e", true) => Letter::Et,
        _ => return None,
    })
}

/// Value of a subexpression: a bare scalar or a typed term.
#[derive(Clone, Debug)]
enum Val {
    Scalar(Scalar),
    Typed(Term),
}

impl Val {
    fn into_term(self, sig: Signature) -> Result<Term, SymbolicError> {
        match self {
            Val::Typed(t) => Ok(t),
            Val::Scalar(c) if c.is_zero() => Ok(Term::zero(sig.0, sig.1)),
            Val::Scalar(c) if sig.0 == sig.1 => Ok(Term::scalar(c, sig.0)),
            Val::Scalar(c) => Err(SymbolicError::Signature(format!(
                "scalar {c} cannot be a map {}→{}",
                sig.0, sig.1
            ))),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, message: impl Into<String>) -> SymbolicError {
        SymbolicError::Parse {
            position: self.here(),
            message: message.into(),
        }
    }

    fn sum(&mut self) -> Result<Val, SymbolicError> {
        let mut parts: Vec<Val> = Vec::new();
        let mut negative = false;
        if self.peek() == Some(&Tok::Minus) {
            negative = true;
            self.pos += 1;
        }
        loop {
            let v = self.product()?;
            parts.push(if negative { negate(v) } else { v });
            match self.peek() {
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                _ => break,
            }
            self.pos += 1;
        }
        let typed = parts.iter().find_map(|v| match v {
            Val::Typed(t) => Some(t.signature()),
            Val::Scalar(_) => None,
        });
        match typed {
            None => Ok(Val::Scalar(parts.into_iter().fold(Scalar::zero(), |acc, v| match v {
                Val::Scalar(c) => &acc + &c,
                Val::Typed(_) => unreachable!(),
            }))),
            Some(sig) => {
                let mut total = Term::zero(sig.0, sig.1);
                for v in parts {
                    total = total.add(&v.into_term(sig)?)?;
                }
                Ok(Val::Typed(total))
            }
        }
    }

    fn product(&mut self) -> Result<Val, SymbolicError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Dot) => {
                    self.pos += 1;
                }
                Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen) => {}
                _ => break,
            }
            let rhs = self.factor()?;
            acc = multiply(acc, rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Val, SymbolicError> {
        let mut v = self.primary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            v = match v {
                Val::Scalar(c) => Val::Scalar(c),
                Val::Typed(t) => Val::Typed(t.adjoint()),
            };
        }
        Ok(v)
    }

    fn primary(&mut self) -> Result<Val, SymbolicError> {
        let at = self.here();
        let tok = self.peek().cloned().ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Val::Scalar(Scalar::int(n))),
            Tok::LParen => {
                let v = self.sum()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Ident(name) => {
                if name == "s" {
                    return Ok(Val::Scalar(Scalar::s()));
                }
                if name == "k" {
                    return Ok(Val::Scalar(Scalar::k()));
                }
                if let Some(space) = name.strip_prefix("1_") {
                    let space = Space::from_name(space).ok_or_else(|| SymbolicError::Parse {
                        position: at,
                        message: format!("unknown space {space:?}"),
                    })?;
                    return Ok(Val::Typed(Term::identity(space)));
                }
                let l = letter(&name).ok_or_else(|| SymbolicError::Parse {
                    position: at,
                    message: format!("unknown identifier {name:?}"),
                })?;
                Ok(Val::Typed(Term::symbol(Sym::new(l, false))))
            }
            other => {
                self.pos -= 1;
                Err(self.error(format!("unexpected {other:?}")))
            }
        }
    }
}

fn negate(v: Val) -> Val {
    match v {
        Val::Scalar(c) => Val::Scalar(-&c),
        Val::Typed(t) => Val::Typed(t.neg()),
    }
}

fn multiply(x: Val, y: Val) -> Result<Val, SymbolicError> {
    Ok(match (x, y) {
        (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(&a * &b),
        (Val::Scalar(a), Val::Typed(t)) | (Val::Typed(t), Val::Scalar(a)) => Val::Typed(t.scale(&a)),
        (Val::Typed(a), Val::Typed(b)) => Val::Typed(a.compose(&b)?),
    })
}

fn parse_val(text: &str) -> Result<Val, SymbolicError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
    };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(p.error("trailing input"));
    }
    Ok(v)
}

/// Parses a term whose signature is determined by its symbols.
pub fn parse_term(text: &str) -> Result<Term, SymbolicError> {
    match parse_val(text)? {
        Val::Typed(t) => Ok(t),
        Val::Scalar(c) => Err(SymbolicError::Signature(format!(
            "scalar expression {c} has no signature; write it times 1_H0 or similar"
        ))),
    }
}

/// Parses a term that must have the given `(source, target)` signature.
pub fn parse_term_as(text: &str, sig: Signature) -> Result<Term, SymbolicError> {
    let t = parse_val(text)?.into_term(sig)?;
    if t.signature() != sig {
        return Err(SymbolicError::Signature(format!(
            "`{text}` is a map {}→{}, expected {}→{}",
            t.source(),
            t.target(),
            sig.0,
            sig.1
        )));
    }
    Ok(t)
}
