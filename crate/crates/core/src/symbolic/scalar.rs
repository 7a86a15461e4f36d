//! Exact coefficients in `Z[s, k] / (s² + k² − 1)`, where `s = sin t` and
//! `k = cos t`. Canonical form has `s`-degree at most one.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `Σ c · s^e · k^j` with `e ∈ {0, 1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<(u8, u32), i64>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn int(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn s() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn k() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// `c · s^se · k^ke`, reduced.
    pub fn monomial(c: i64, se: u32, ke: u32) -> Self {
        let mut out = Self::zero();
        out.add_monomial(c, se, ke);
        out
    }

    fn add_raw(&mut self, c: i64, se: u8, ke: u32) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry((se, ke)).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&(se, ke));
        }
    }

    /// Adds `c · s^se · k^ke` using `s² = 1 − k²`.
    fn add_monomial(&mut self, c: i64, se: u32, ke: u32) {
        if c == 0 {
            return;
        }
        if se < 2 {
            self.add_raw(c, se as u8, ke);
            return;
        }
        self.add_monomial(c, se - 2, ke);
        self.add_monomial(-c, se - 2, ke + 2);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn as_int(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    /// Value at integer `s` and `k` (used at the endpoints `t = 0, π/2`).
    pub fn eval_int(&self, s: i64, k: i64) -> i64 {
        self.terms
            .iter()
            .map(|(&(se, ke), &c)| c * s.pow(se as u32) * k.pow(ke))
            .sum()
    }

    pub fn eval(&self, s: f64, k: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(se, ke), &c)| c as f64 * s.powi(se as i32) * k.powi(ke as i32))
            .sum()
    }

    fn is_single(&self) -> bool {
        self.terms.len() == 1
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (&(se, ke), &c) in &rhs.terms {
            out.add_raw(c, se, ke);
        }
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(&m, &c)| (m, -c)).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (&(s1, k1), &c1) in &self.terms {
            for (&(s2, k2), &c2) in &rhs.terms {
                out.add_monomial(c1 * c2, (s1 + s2) as u32, k1 + k2);
            }
        }
        out
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, var: &str, e: u32, first: &mut bool) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, " ")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{var}")
    } else {
        write!(f, "{var}^{e}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest degree first.
        for (i, (&(se, ke), &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut first = true;
            if mag != 1 || (se == 0 && ke == 0) {
                write!(f, "{mag}")?;
                first = false;
            }
            fmt_power(f, "s", se as u32, &mut first)?;
            fmt_power(f, "k", ke, &mut first)?;
        }
        Ok(())
    }
}

impl Scalar {
    /// Sign and body when written in front of an operator word; the body is
    /// empty for `±1`.
    pub(crate) fn coefficient_parts(&self) -> (bool, String) {
        if self.is_single() {
            let (&(se, ke), &c) = self.terms.iter().next().expect("single");
            let negative = c < 0;
            let body = Scalar::monomial(c.abs(), se as u32, ke).to_string();
            let body = if body == "1" { String::new() } else { body };
            return (negative, body);
        }
        (false, format!("({self})"))
    }
}
