//! Integer partitions and the orbit/stabilizer arithmetic behind the
//! dimension recursion.
//!
//! Partitions are stored with weakly decreasing parts. All counts are exact
//! [`BigUint`]s.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::CombError;

/// A partition `λ = (n₁ ≥ n₂ ≥ … ≥ nₘ ≥ 1)` of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from parts given in any order.
    pub fn new(mut parts: Vec<usize>) -> Result<Self, CombError> {
        if parts.is_empty() {
            return Err(CombError::EmptyPartition);
        }
        if parts.contains(&0) {
            return Err(CombError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The partitioned integer `n`.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts `m`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Distinct part values (decreasing) with their multiplicities.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((v, k)) if *v == p => *k += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` with at least `min_parts` parts, in decreasing
/// lexicographic order. `n = 0` yields nothing.
///
/// The dimension recursion uses `min_parts = 2`, which drops the one-part
/// partition `(n)`.
pub fn partitions(n: usize, min_parts: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, min_parts: usize, out: &mut Vec<Partition>) {
        if rest == 0 {
            if cur.len() >= min_parts {
                out.push(Partition { parts: cur.clone() });
            }
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, min_parts, out);
            cur.pop();
        }
    }

    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, n, &mut Vec::new(), min_parts.max(1), &mut out);
    out
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// `(2k-1)!! = 1·3·5·…·(2k-1)`; `k = 0` gives 1.
pub fn odd_double_factorial(k: usize) -> BigUint {
    (0..k as u64).fold(BigUint::one(), |acc, i| acc * (2 * i + 1))
}

/// `|S(m,λ)|`: the number of permutations of the parts that preserve part
/// sizes, i.e. the product of `(multiplicity of v)!` over distinct values.
pub fn stabilizer_order(p: &Partition) -> BigUint {
    p.multiplicities()
        .into_iter()
        .map(|(_, k)| factorial(k))
        .product()
}

/// `n! / (n₁!⋯nₘ! · |S(m,λ)|)`: the number of set partitions of an `n`-set
/// whose block sizes are exactly `λ`.
///
/// Panics if the division is not exact, which would mean an arithmetic bug.
pub fn orbit_count(p: &Partition) -> BigUint {
    let denom: BigUint =
        p.parts.iter().map(|&k| factorial(k)).product::<BigUint>() * stabilizer_order(p);
    let (q, r) = factorial(p.n()).div_rem(&denom);
    assert!(r.is_zero(), "orbit count for {p} is not an integer");
    q
}

/// Set partitions of `items` into nonempty blocks, each block in the input
/// order and blocks ordered by their first element. Generated from
/// restricted growth strings, so the output order is deterministic.
pub fn set_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    fn rec<T: Clone>(items: &[T], i: usize, blocks: &mut Vec<Vec<T>>, out: &mut Vec<Vec<Vec<T>>>) {
        if i == items.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[i].clone());
            rec(items, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[i].clone()]);
        rec(items, i + 1, blocks, out);
        blocks.pop();
    }

    let mut out = Vec::new();
    if items.is_empty() {
        out.push(Vec::new());
        return out;
    }
    rec(items, 0, &mut Vec::new(), &mut out);
    out
}
