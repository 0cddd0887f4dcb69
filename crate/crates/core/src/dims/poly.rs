//! Polynomials with nonnegative integer coefficients in the commuting
//! indeterminates `x₂, x₃, …` and `y₂, y₃, …`.
//!
//! Monomials are kept in a fixed order: increasing total degree, then
//! decreasing exponent vectors compared variable by variable in the order
//! `xₙ > … > x₂ > yₙ > … > y₂`. This is also the printing order, so
//! `d₃^•` prints as `x3 + 3*x2*y2`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::DimsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X(u32),
    Y(u32),
}

impl Var {
    fn key(self) -> (u8, std::cmp::Reverse<u32>) {
        match self {
            Var::X(k) => (0, std::cmp::Reverse(k)),
            Var::Y(k) => (1, std::cmp::Reverse(k)),
        }
    }

    pub fn swapped(self) -> Var {
        match self {
            Var::X(k) => Var::Y(k),
            Var::Y(k) => Var::X(k),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(k) => write!(f, "x{k}"),
            Var::Y(k) => write!(f, "y{k}"),
        }
    }
}

/// A power product, stored as `(var, exponent)` pairs sorted by [`Var`]
/// order with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in powers {
            if e > 0 {
                m = m.mul(&Monomial(vec![(v, e)]));
            }
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn swapped(&self) -> Monomial {
        let mut v: Vec<(Var, u32)> = self.0.iter().map(|&(v, e)| (v.swapped(), e)).collect();
        v.sort_by_key(|&(v, _)| v);
        Monomial(v)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (&(va, ea), &(vb, eb)) in self.0.iter().zip(&other.0) {
                match va.cmp(&vb) {
                    // the earlier variable occurs only on the left
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal if ea != eb => return eb.cmp(&ea),
                    Ordering::Equal => {}
                }
            }
            other.0.len().cmp(&self.0.len())
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial over `ℕ` in the `x`/`y` indeterminates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, BigUint>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn constant(c: BigUint) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::var(v), BigUint::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(m).or_default() += c;
    }

    /// Terms in printing order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigUint {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigUint) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Interchanges every `xₖ` with `yₖ`.
    pub fn swap_xy(&self) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.swapped(), c.clone());
        }
        out
    }

    pub fn eval(&self, value: impl Fn(Var) -> BigUint) -> BigUint {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.powers()
                    .iter()
                    .fold(c.clone(), |acc, &(v, e)| acc * value(v).pow(e))
            })
            .sum()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (c.is_one(), m.powers().is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (true, false) => write!(f, "{m}")?,
                (false, false) => write!(f, "{c}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Parses the printed form, e.g. `x4 + 6*x3*y2 + 3*x2*y2^2`. Juxtaposition
/// without `*` (`6x3y2`) is also accepted.
impl FromStr for MultiPoly {
    type Err = DimsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut poly = MultiPoly::zero();
        for raw in s.split('+') {
            let term: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(DimsError::Poly(format!("empty term in `{s}`")));
            }
            let bytes = term.as_bytes();
            let mut i = 0;
            let mut coeff = BigUint::one();
            let mut mono = Monomial::one();
            let digits = |i: &mut usize| {
                let start = *i;
                while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                    *i += 1;
                }
                &term[start..*i]
            };
            let lead = digits(&mut i);
            if !lead.is_empty() {
                coeff = lead.parse().map_err(|_| DimsError::Poly(term.clone()))?;
            }
            while i < bytes.len() {
                if bytes[i] == b'*' {
                    i += 1;
                    continue;
                }
                let var = match bytes[i] {
                    b'x' => Var::X as fn(u32) -> Var,
                    b'y' => Var::Y,
                    _ => return Err(DimsError::Poly(format!("unexpected `{}` in `{term}`", &term[i..]))),
                };
                i += 1;
                let idx: u32 = digits(&mut i).parse().map_err(|_| DimsError::Poly(term.clone()))?;
                let mut exp = 1u32;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    exp = digits(&mut i).parse().map_err(|_| DimsError::Poly(term.clone()))?;
                }
                mono = mono.mul(&Monomial::from_powers([(var(idx), exp)]));
            }
            poly.add_term(mono, coeff);
        }
        Ok(poly)
    }
}
