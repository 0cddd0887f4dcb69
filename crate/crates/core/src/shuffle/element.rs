//! Linear combinations of shuffle monomials over `ℚ`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::{Parser, ShuffleMonomial};
use crate::error::ShuffleError;

/// A finite sum `Σ cᵢ·mᵢ` with nonzero rational coefficients and monomials
/// of one common arity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShuffleElement {
    terms: BTreeMap<ShuffleMonomial, BigRational>,
}

impl ShuffleElement {
    pub fn zero() -> Self {
        ShuffleElement::default()
    }

    pub fn monomial(m: ShuffleMonomial) -> Self {
        Self::term(m, BigRational::one())
    }

    pub fn term(m: ShuffleMonomial, c: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Arity of the monomials, `None` for zero.
    pub fn arity(&self) -> Option<usize> {
        self.terms.keys().next().map(ShuffleMonomial::arity)
    }

    /// Adds `c·m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: ShuffleMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(self.arity().is_none_or(|a| a == m.arity()), "mixed arities");
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, m: &ShuffleMonomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&ShuffleMonomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&ShuffleMonomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &ShuffleMonomial> {
        self.terms.keys().rev()
    }

    pub(crate) fn pop_leading(&mut self) -> Option<(ShuffleMonomial, BigRational)> {
        self.terms.pop_last()
    }

    pub fn add_scaled(&mut self, other: &ShuffleElement, c: &BigRational) {
        for (m, d) in &other.terms {
            self.add_term(m.clone(), d * c);
        }
    }

    pub fn scaled(&self, c: &BigRational) -> ShuffleElement {
        let mut out = ShuffleElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &ShuffleElement) -> ShuffleElement {
        let mut out = self.clone();
        out.add_scaled(other, &-BigRational::one());
        out
    }

    pub fn add(&self, other: &ShuffleElement) -> ShuffleElement {
        let mut out = self.clone();
        out.add_scaled(other, &BigRational::one());
        out
    }
}

impl FromIterator<(ShuffleMonomial, BigRational)> for ShuffleElement {
    fn from_iter<I: IntoIterator<Item = (ShuffleMonomial, BigRational)>>(iter: I) -> Self {
        let mut e = ShuffleElement::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

/// `x(x(1 2) 3) - 2*x(1 x(2 3)) + 1/2*y(1 y(2 3))`, largest term first.
impl fmt::Display for ShuffleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                (_, false) => f.write_str(" + ")?,
                (_, true) => f.write_str(" - ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for ShuffleElement {
    type Err = ShuffleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let e = parse_element(&mut p)?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

/// Parses a signed sum of terms `[coef[*]]monomial`, or `0`.
pub(crate) fn parse_element(p: &mut Parser<'_>) -> Result<ShuffleElement, ShuffleError> {
    let mut e = ShuffleElement::zero();
    let mut first = true;
    loop {
        p.skip_ws();
        let sign = match p.peek() {
            Some('+') => {
                p.pos += 1;
                BigRational::one()
            }
            Some('-') => {
                p.pos += 1;
                -BigRational::one()
            }
            _ if first => BigRational::one(),
            _ => break,
        };
        p.skip_ws();
        let start = p.pos;
        let coeff = parse_coefficient(p)?;
        p.skip_ws();
        let monomial_follows = matches!(p.peek(), Some(c) if c.is_alphabetic() || c == '_');
        let c = sign * coeff.clone().unwrap_or_else(BigRational::one);
        if monomial_follows {
            let node = p.node()?;
            let m = ShuffleMonomial::new(node)?;
            if let Some(a) = e.arity() {
                if a != m.arity() {
                    return Err(ShuffleError::ArityMismatch(a, m.arity()));
                }
            }
            e.add_term(m, c);
        } else if coeff.as_ref().is_some_and(Zero::is_zero) && first {
            // the literal `0`
        } else {
            p.pos = start;
            return Err(p.error("expected a monomial"));
        }
        first = false;
    }
    Ok(e)
}

/// An optional `a`, `a/b`, followed by an optional `*`. A bare integer
/// directly followed by `(` is not a coefficient.
fn parse_coefficient(p: &mut Parser<'_>) -> Result<Option<BigRational>, ShuffleError> {
    if !matches!(p.peek(), Some(c) if c.is_ascii_digit()) {
        return Ok(None);
    }
    let start = p.pos;
    let num: BigInt = p.take_while(|c| c.is_ascii_digit()).parse().expect("digits");
    let mut value = BigRational::from_integer(num);
    if p.peek() == Some('/') {
        p.pos += 1;
        let den_str = p.take_while(|c| c.is_ascii_digit());
        let den: BigInt = den_str.parse().map_err(|_| p.error("expected a denominator"))?;
        if den.is_zero() {
            p.pos = start;
            return Err(p.error("zero denominator"));
        }
        value /= BigRational::from_integer(den);
    }
    p.skip_ws();
    if p.peek() == Some('*') {
        p.pos += 1;
    }
    Ok(Some(value))
}
