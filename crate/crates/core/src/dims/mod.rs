//! Dimensions of free products `O₁ ∗ O₂` of binary operads.
//!
//! With `x_m = dim O₁(m)` and `y_m = dim O₂(m)`, the arity-`n` part splits
//! into trees with a `•` root and trees with a `∘` root:
//!
//! ```text
//! d•(n) = Σ_{λ ⊢ n, m ≥ 2} orbit(λ) · x_m · c∘(n₁) ⋯ c∘(nₘ)
//! d∘(n) = Σ_{λ ⊢ n, m ≥ 2} orbit(λ) · y_m · c•(n₁) ⋯ c•(nₘ)
//! ```
//!
//! where `c(1) = 1` (a bare leaf) and `c(k) = d(k)` for `k ≥ 2`. The same
//! recursion runs over integers ([`free_product_dims`]) and over the
//! polynomial semiring in the `x`, `y` symbols ([`symbolic_dims`]).

mod config;
mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::comb::{binomial, factorial, odd_double_factorial, orbit_count, partitions};
use crate::error::DimsError;

pub use config::{parse_operad_config, resolve_operad, OperadConfig};
pub use poly::{Monomial, MultiPoly, Var};

/// Operads whose dimension sequences are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Commutative associative: 1.
    ComAs,
    /// Associative: `n!`.
    As,
    /// Lie: `(n-1)!`.
    Lie,
    /// Commutative magmatic: `(2n-3)!!`.
    Com,
    /// Anticommutative magmatic: `(2n-3)!!`.
    AntiCom,
    /// Novikov: `C(2n-2, n-1)`.
    Nov,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::ComAs,
        Builtin::As,
        Builtin::Lie,
        Builtin::Com,
        Builtin::AntiCom,
        Builtin::Nov,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Builtin::ComAs => "com-as",
            Builtin::As => "as",
            Builtin::Lie => "lie",
            Builtin::Com => "com",
            Builtin::AntiCom => "anti-com",
            Builtin::Nov => "nov",
        }
    }

    /// `dim O(n)` for `n ≥ 1`.
    pub fn dim(self, n: usize) -> BigUint {
        debug_assert!(n >= 1);
        match self {
            Builtin::ComAs => BigUint::one(),
            Builtin::As => factorial(n),
            Builtin::Lie => factorial(n - 1),
            Builtin::Com | Builtin::AntiCom => odd_double_factorial(n - 1),
            Builtin::Nov => binomial(2 * n - 2, n - 1),
        }
    }
}

impl FromStr for Builtin {
    type Err = DimsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.id() == s)
            .ok_or_else(|| DimsError::UnknownOperad(s.to_string()))
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Source {
    Builtin(Builtin),
    /// `values[0]` is `dim O(2)`.
    Explicit { values: Vec<BigUint>, tail: Option<Builtin> },
}

/// The dimension sequence `n ↦ dim O(n)` of a component operad. Arity 1 is
/// always 1 (the identity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperadDims {
    name: String,
    source: Source,
}

impl OperadDims {
    pub fn builtin(b: Builtin) -> Self {
        OperadDims { name: b.id().to_string(), source: Source::Builtin(b) }
    }

    /// Looks up a built-in operad by id (`com-as`, `as`, `lie`, `com`,
    /// `anti-com`, `nov`).
    pub fn named(id: &str) -> Result<Self, DimsError> {
        Ok(Self::builtin(id.parse()?))
    }

    /// A user-supplied sequence starting at arity 2. Requests beyond the
    /// sequence fail unless a closed-form `tail` is given.
    pub fn explicit(name: impl Into<String>, values: Vec<BigUint>, tail: Option<Builtin>) -> Self {
        OperadDims { name: name.into(), source: Source::Explicit { values, tail } }
    }

    /// Convenience for tests and small inputs.
    pub fn from_u64s(name: impl Into<String>, values: &[u64]) -> Self {
        Self::explicit(name, values.iter().map(|&v| BigUint::from(v)).collect(), None)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self, n: usize) -> Result<BigUint, DimsError> {
        match (n, &self.source) {
            (0, _) => Err(DimsError::ZeroArity),
            (1, _) => Ok(BigUint::one()),
            (_, Source::Builtin(b)) => Ok(b.dim(n)),
            (_, Source::Explicit { values, tail }) => match (values.get(n - 2), tail) {
                (Some(v), _) => Ok(v.clone()),
                (None, Some(b)) => Ok(b.dim(n)),
                (None, None) => Err(DimsError::OutOfRange {
                    name: self.name.clone(),
                    arity: n,
                    available: values.len() + 1,
                }),
            },
        }
    }

    /// Dimensions for arities `1..=n_max`, index 0 unused.
    pub fn table(&self, n_max: usize) -> Result<Vec<BigUint>, DimsError> {
        let mut out = vec![BigUint::zero()];
        for n in 1..=n_max {
            out.push(self.dim(n)?);
        }
        Ok(out)
    }
}

/// `d•`, `d∘` and `d = d• + d∘` for arities up to `n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimTable {
    n_max: usize,
    bullet: Vec<BigUint>,
    circ: Vec<BigUint>,
    total: Vec<BigUint>,
}

impl DimTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `d•(n)`; undefined (None) for `n < 2`.
    pub fn bullet(&self, n: usize) -> Option<&BigUint> {
        (2..=self.n_max).contains(&n).then(|| &self.bullet[n])
    }

    pub fn circ(&self, n: usize) -> Option<&BigUint> {
        (2..=self.n_max).contains(&n).then(|| &self.circ[n])
    }

    /// `dim (O₁ ∗ O₂)(n)`, with `total(1) = 1`.
    pub fn total(&self, n: usize) -> Option<&BigUint> {
        (1..=self.n_max).contains(&n).then(|| &self.total[n])
    }

    /// Totals for `n = 1..=n_max`.
    pub fn totals(&self) -> &[BigUint] {
        &self.total[1..]
    }
}

pub(crate) trait Semiring: Clone + Default {
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, k: &BigUint) -> Self;
}

impl Semiring for BigUint {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, k: &BigUint) -> Self {
        self * k
    }
}

impl Semiring for MultiPoly {
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scaled(&self, k: &BigUint) -> Self {
        self.scale(k)
    }
}

/// Runs the recursion for `2 ≤ n ≤ n_max`, given `x[m]`, `y[m]` for
/// `2 ≤ m ≤ n_max`. Returns `(d•, d∘)` indexed by arity.
pub(crate) fn run_recursion<S: Semiring>(n_max: usize, x: &[S], y: &[S]) -> (Vec<S>, Vec<S>) {
    let mut bullet = vec![S::default(); n_max + 1];
    let mut circ = vec![S::default(); n_max + 1];
    for n in 2..=n_max {
        let mut b = S::default();
        let mut c = S::default();
        for lam in partitions(n, 2) {
            let k = orbit_count(&lam);
            let m = lam.len();
            let mut tb = x[m].scaled(&k);
            let mut tc = y[m].scaled(&k);
            for &ni in lam.parts().iter().filter(|&&ni| ni >= 2) {
                tb = tb.times(&circ[ni]);
                tc = tc.times(&bullet[ni]);
            }
            b = b.plus(&tb);
            c = c.plus(&tc);
        }
        bullet[n] = b;
        circ[n] = c;
    }
    (bullet, circ)
}

/// Dimension table of `x ∗ y` up to arity `n_max` (at least 2).
pub fn free_product_dims(x: &OperadDims, y: &OperadDims, n_max: usize) -> Result<DimTable, DimsError> {
    if n_max < 2 {
        return Err(DimsError::NMaxTooSmall(n_max));
    }
    let xs = x.table(n_max)?;
    let ys = y.table(n_max)?;
    let (bullet, circ) = run_recursion(n_max, &xs, &ys);
    let mut total: Vec<BigUint> = bullet.iter().zip(&circ).map(|(b, c)| b + c).collect();
    total[1] = BigUint::one();
    total[0] = BigUint::zero();
    Ok(DimTable { n_max, bullet, circ, total })
}

/// `d•(n)` and `d∘(n)` as polynomials in `x₂…xₙ`, `y₂…yₙ`, for
/// `2 ≤ n ≤ n_max ≤ 8`.
pub fn symbolic_dims(n_max: usize) -> Result<BTreeMap<usize, (MultiPoly, MultiPoly)>, DimsError> {
    if !(2..=8).contains(&n_max) {
        return Err(DimsError::SymbolicRange(n_max));
    }
    let xs: Vec<MultiPoly> = (0..=n_max as u32).map(|m| MultiPoly::var(Var::X(m))).collect();
    let ys: Vec<MultiPoly> = (0..=n_max as u32).map(|m| MultiPoly::var(Var::Y(m))).collect();
    let (bullet, _) = run_recursion(n_max, &xs, &ys);
    Ok((2..=n_max)
        .map(|n| {
            let b = bullet[n].clone();
            let c = b.swap_xy();
            (n, (b, c))
        })
        .collect())
}
