//! Signature-typed noncommutative polynomials in the block symbols.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::scalar::Scalar;
use super::SymbolicError;

/// Summands of `H ⊕ H̃` with `H_0` and `H̃_0` identified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Space {
    H1,
    H0,
    H2,
    H1t,
    H2t,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Middle,
    Right,
}

impl Space {
    pub const ALL: [Space; 5] = [Space::H1, Space::H0, Space::H2, Space::H1t, Space::H2t];

    pub fn side(self) -> Side {
        match self {
            Space::H1 | Space::H1t => Side::Left,
            Space::H0 => Side::Middle,
            Space::H2 | Space::H2t => Side::Right,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Space::H1 => "H1",
            Space::H0 => "H0",
            Space::H2 => "H2",
            Space::H1t => "H1t",
            Space::H2t => "H2t",
        }
    }

    pub fn from_name(name: &str) -> Option<Space> {
        Space::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(source, target)` of an operator.
pub type Signature = (Space, Space);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    D,
    E,
    At,
    Bt,
    Dt,
    Et,
}

impl Letter {
    pub const ALL: [Letter; 9] = [
        Letter::A,
        Letter::B,
        Letter::C,
        Letter::D,
        Letter::E,
        Letter::At,
        Letter::Bt,
        Letter::Dt,
        Letter::Et,
    ];

    /// `(source, target)` of the unstarred symbol.
    pub fn signature(self) -> Signature {
        use Space::*;
        match self {
            Letter::A => (H1, H1),
            Letter::B => (H0, H1),
            Letter::C => (H0, H0),
            Letter::D => (H2, H0),
            Letter::E => (H2, H2),
            Letter::At => (H1t, H1t),
            Letter::Bt => (H0, H1t),
            Letter::Dt => (H2t, H0),
            Letter::Et => (H2t, H2t),
        }
    }

    pub fn is_selfadjoint(self) -> bool {
        matches!(self, Letter::A | Letter::C | Letter::E | Letter::At | Letter::Et)
    }

    pub fn is_tilde(self) -> bool {
        matches!(self, Letter::At | Letter::Bt | Letter::Dt | Letter::Et)
    }

    /// Weight used by the termination measure.
    pub fn weight(self) -> u32 {
        match self {
            Letter::A | Letter::At => 5,
            Letter::B | Letter::Bt => 4,
            Letter::C | Letter::D | Letter::Dt => 3,
            Letter::E | Letter::Et => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Letter::A => "a",
            Letter::B => "b",
            Letter::C => "c",
            Letter::D => "d",
            Letter::E => "e",
            Letter::At => "a~",
            Letter::Bt => "b~",
            Letter::Dt => "d~",
            Letter::Et => "e~",
        }
    }
}

/// A block symbol, possibly starred. Self-adjoint symbols are never starred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sym {
    pub letter: Letter,
    pub adj: bool,
}

impl Sym {
    pub fn new(letter: Letter, adj: bool) -> Self {
        Self {
            letter,
            adj: adj && !letter.is_selfadjoint(),
        }
    }

    pub fn star(self) -> Self {
        Self::new(self.letter, !self.adj)
    }

    pub fn signature(self) -> Signature {
        let (s, t) = self.letter.signature();
        if self.adj {
            (t, s)
        } else {
            (s, t)
        }
    }

    pub fn source(self) -> Space {
        self.signature().0
    }

    pub fn target(self) -> Space {
        self.signature().1
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter.name())?;
        if self.adj {
            f.write_str("*")?;
        }
        Ok(())
    }
}

/// Operator product `x_1 x_2 … x_n`; `x_n` acts first. Empty means identity.
pub type Word = Vec<Sym>;

pub fn word_string(w: &[Sym]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Spaces visited by a nonempty word, from its target to its source.
pub fn word_path(w: &[Sym]) -> Vec<Space> {
    let mut out: Vec<Space> = w.iter().map(|x| x.target()).collect();
    if let Some(last) = w.last() {
        out.push(last.source());
    }
    out
}

/// True iff the word passes through both the `H_1` side and the `H_2` side.
pub fn crosses(w: &[Sym]) -> bool {
    let path = word_path(w);
    path.iter().any(|s| s.side() == Side::Left) && path.iter().any(|s| s.side() == Side::Right)
}

pub fn word_adjoint(w: &[Sym]) -> Word {
    w.iter().rev().map(|x| x.star()).collect()
}

/// Termination measure of a word: (letter weight, tilde count).
pub fn word_measure(w: &[Sym]) -> (u32, usize) {
    (
        w.iter().map(|x| x.letter.weight()).sum(),
        w.iter().filter(|x| x.letter.is_tilde()).count(),
    )
}

/// Checks that consecutive factors compose and returns the signature.
pub fn word_signature(w: &[Sym]) -> Result<Signature, SymbolicError> {
    let (first, last) = match (w.first(), w.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(SymbolicError::Signature("empty word has no signature".into())),
    };
    for pair in w.windows(2) {
        if pair[0].source() != pair[1].target() {
            return Err(mismatch(pair[0], pair[1]));
        }
    }
    Ok((last.source(), first.target()))
}

pub(crate) fn mismatch(left: Sym, right: Sym) -> SymbolicError {
    SymbolicError::Signature(format!(
        "`{left} {right}`: {left} consumes {} but {right} produces {}",
        left.source(),
        right.target()
    ))
}

/// Finite sum of scalar multiples of words, all of one signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    source: Space,
    target: Space,
    mons: BTreeMap<Word, Scalar>,
}

impl Term {
    pub fn zero(source: Space, target: Space) -> Self {
        Self {
            source,
            target,
            mons: BTreeMap::new(),
        }
    }

    pub fn identity(space: Space) -> Self {
        Self::scalar(Scalar::one(), space)
    }

    pub fn scalar(c: Scalar, space: Space) -> Self {
        let mut t = Self::zero(space, space);
        t.add_monomial(Word::new(), c);
        t
    }

    pub fn symbol(x: Sym) -> Self {
        let (source, target) = x.signature();
        let mut t = Self::zero(source, target);
        t.add_monomial(vec![x], Scalar::one());
        t
    }

    /// Single word with coefficient; the word must compose.
    pub fn word(w: Word, c: Scalar) -> Result<Self, SymbolicError> {
        let (source, target) = word_signature(&w)?;
        let mut t = Self::zero(source, target);
        t.add_monomial(w, c);
        Ok(t)
    }

    pub fn signature(&self) -> Signature {
        (self.source, self.target)
    }

    pub fn source(&self) -> Space {
        self.source
    }

    pub fn target(&self) -> Space {
        self.target
    }

    pub fn is_zero(&self) -> bool {
        self.mons.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.mons.len() == 1 && self.mons.get(&Word::new()).is_some_and(Scalar::is_one)
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.mons.iter()
    }

    pub fn len(&self) -> usize {
        self.mons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mons.is_empty()
    }

    pub(crate) fn add_monomial(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.mons.remove(&w) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.mons.insert(w, sum);
        }
    }

    pub(crate) fn remove_monomial(&mut self, w: &Word) -> Option<Scalar> {
        self.mons.remove(w)
    }

    fn check_same(&self, other: &Term, op: &str) -> Result<(), SymbolicError> {
        if self.signature() != other.signature() {
            return Err(SymbolicError::Signature(format!(
                "cannot {op} terms of signatures {}→{} and {}→{}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Term) -> Result<Term, SymbolicError> {
        self.check_same(other, "add")?;
        let mut out = self.clone();
        for (w, c) in &other.mons {
            out.add_monomial(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Term) -> Result<Term, SymbolicError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Term {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Term {
        let mut out = Term::zero(self.source, self.target);
        for (w, x) in &self.mons {
            out.add_monomial(w.clone(), x * c);
        }
        out
    }

    /// Operator product `self ∘ other` (`other` acts first).
    pub fn compose(&self, other: &Term) -> Result<Term, SymbolicError> {
        if self.source != other.target {
            let left = self.mons.keys().find_map(|w| w.last().copied());
            let right = other.mons.keys().find_map(|w| w.first().copied());
            return Err(match (left, right) {
                (Some(l), Some(r)) => mismatch(l, r),
                _ => SymbolicError::Signature(format!(
                    "cannot compose {}→{} after {}→{}",
                    self.source, self.target, other.source, other.target
                )),
            });
        }
        let mut out = Term::zero(other.source, self.target);
        for (w1, c1) in &self.mons {
            for (w2, c2) in &other.mons {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_monomial(w, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Term {
        let mut out = Term::zero(self.target, self.source);
        for (w, c) in &self.mons {
            out.add_monomial(word_adjoint(w), c.clone());
        }
        out
    }

    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> Term {
        let mut out = Term::zero(self.source, self.target);
        for (w, c) in &self.mons {
            out.add_monomial(w.clone(), f(c));
        }
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mons.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.mons.iter().enumerate() {
            let (negative, body) = c.coefficient_parts();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (body.is_empty(), w.is_empty()) {
                (true, true) => f.write_str("1")?,
                (true, false) => f.write_str(&word_string(w))?,
                (false, true) => f.write_str(&body)?,
                (false, false) => write!(f, "{body} {}", word_string(w))?,
            }
        }
        Ok(())
    }
}
