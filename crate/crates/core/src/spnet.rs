//! Series-parallel networks with unlabeled edges.
//!
//! Networks are canonical terms, not graphs: a series node never has a
//! series child, a parallel node never has a parallel child, and children
//! are kept sorted so structural equality is network equality. The text
//! form is `P(e e S(e e))` with `e` for an edge.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::SpnetError;
use crate::trees::{Color, UnlabeledTree};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpNetwork {
    Edge,
    Series(Vec<SpNetwork>),
    Parallel(Vec<SpNetwork>),
}

impl SpNetwork {
    /// Series composition, flattening nested series parts.
    pub fn series(parts: impl IntoIterator<Item = SpNetwork>) -> SpNetwork {
        Self::compose(parts, true)
    }

    /// Parallel composition, flattening nested parallel parts.
    pub fn parallel(parts: impl IntoIterator<Item = SpNetwork>) -> SpNetwork {
        Self::compose(parts, false)
    }

    fn compose(parts: impl IntoIterator<Item = SpNetwork>, series: bool) -> SpNetwork {
        let mut children = Vec::new();
        for p in parts {
            match p {
                SpNetwork::Series(cs) if series => children.extend(cs),
                SpNetwork::Parallel(cs) if !series => children.extend(cs),
                other => children.push(other),
            }
        }
        if children.len() == 1 {
            return children.pop().unwrap();
        }
        children.sort();
        if series {
            SpNetwork::Series(children)
        } else {
            SpNetwork::Parallel(children)
        }
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        match self {
            SpNetwork::Edge => 1,
            SpNetwork::Series(cs) | SpNetwork::Parallel(cs) => cs.iter().map(SpNetwork::size).sum(),
        }
    }

    fn kind(&self) -> u8 {
        match self {
            SpNetwork::Edge => 0,
            SpNetwork::Parallel(_) => 1,
            SpNetwork::Series(_) => 2,
        }
    }

    fn children(&self) -> &[SpNetwork] {
        match self {
            SpNetwork::Edge => &[],
            SpNetwork::Series(cs) | SpNetwork::Parallel(cs) => cs,
        }
    }

    /// Checks alternation, arity ≥ 2 and sorted children at every node.
    pub fn is_canonical(&self) -> bool {
        match self {
            SpNetwork::Edge => true,
            SpNetwork::Series(cs) | SpNetwork::Parallel(cs) => {
                cs.len() >= 2
                    && cs.windows(2).all(|w| w[0] <= w[1])
                    && cs.iter().all(|c| c.kind() != self.kind() && c.is_canonical())
            }
        }
    }
}

/// Size, then kind (edge < parallel < series), then children in order.
impl Ord for SpNetwork {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.kind().cmp(&other.kind()))
            .then_with(|| self.children().cmp(other.children()))
    }
}

impl PartialOrd for SpNetwork {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SpNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, cs) = match self {
            SpNetwork::Edge => return f.write_str("e"),
            SpNetwork::Series(cs) => ("S", cs),
            SpNetwork::Parallel(cs) => ("P", cs),
        };
        write!(f, "{tag}(")?;
        for (i, c) in cs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for SpNetwork {
    type Err = SpnetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = NetParser { src: s.as_bytes(), pos: 0 };
        let net = p.network()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(net)
    }
}

struct NetParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl NetParser<'_> {
    fn err(&self, message: &str) -> SpnetError {
        SpnetError::Parse { pos: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn network(&mut self) -> Result<SpNetwork, SpnetError> {
        self.skip_ws();
        let series = match self.src.get(self.pos) {
            Some(b'e') => {
                self.pos += 1;
                return Ok(SpNetwork::Edge);
            }
            Some(b'S') => true,
            Some(b'P') => false,
            _ => return Err(self.err("expected `e`, `S(` or `P(`")),
        };
        self.pos += 1;
        if self.src.get(self.pos) != Some(&b'(') {
            return Err(self.err("expected `(`"));
        }
        self.pos += 1;
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            if self.src.get(self.pos) == Some(&b')') {
                self.pos += 1;
                break;
            }
            let start = self.pos;
            let child = self.network()?;
            let nested = matches!((&child, series), (SpNetwork::Series(_), true) | (SpNetwork::Parallel(_), false));
            if nested {
                return Err(SpnetError::Parse { pos: start, message: "same-type nesting".into() });
            }
            children.push(child);
        }
        if children.len() < 2 {
            return Err(self.err("a composite needs at least two parts"));
        }
        Ok(if series { SpNetwork::series(children) } else { SpNetwork::parallel(children) })
    }
}

/// All networks with `n` edges, ascending in the canonical order.
///
/// Built by closing smaller networks under binary series and parallel
/// composition and deduplicating canonical forms.
pub fn enumerate_networks(n: usize) -> Vec<SpNetwork> {
    if n == 0 {
        return Vec::new();
    }
    let mut by_size: Vec<Vec<SpNetwork>> = vec![Vec::new(), vec![SpNetwork::Edge]];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        for k in 1..size {
            for a in &by_size[k] {
                for b in &by_size[size - k] {
                    seen.insert(SpNetwork::series([a.clone(), b.clone()]));
                    seen.insert(SpNetwork::parallel([a.clone(), b.clone()]));
                }
            }
        }
        by_size.push(seen.into_iter().collect());
    }
    by_size.swap_remove(n)
}

/// The number of series-parallel networks with `n` unlabeled edges
/// (MacMahon numbers: 1, 2, 4, 10, 24, 66, 180, …).
///
/// A series network is a multiset of at least two non-series networks, and
/// by duality there are as many parallel ones. Counting multisets of total
/// size `n` from parts of size `< n` is the convolution
/// `[zⁿ] Π_{k<n} (1 - zᵏ)^(-a_k)` with `a_k` the non-series count.
pub fn macmahon(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    // a[k]: networks of size k whose root is not series
    let mut a = vec![BigUint::zero(), BigUint::one()];
    let mut series = vec![BigUint::zero(), BigUint::zero()];
    for size in 2..=n {
        // multisets from kinds of size < `size`
        let mut ways = vec![BigUint::zero(); size + 1];
        ways[0] = BigUint::one();
        for k in 1..size {
            let mut next = vec![BigUint::zero(); size + 1];
            for (total, w) in ways.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                let mut j = 0;
                while total + j * k <= size {
                    next[total + j * k] += w * multichoose(&a[k], j);
                    j += 1;
                }
            }
            ways = next;
        }
        series.push(ways[size].clone());
        a.push(ways[size].clone());
    }
    if n == 1 {
        BigUint::one()
    } else {
        &series[n] * 2u32
    }
}

/// `C(kinds + j - 1, j)`: multisets of size `j` from `kinds` kinds.
fn multichoose(kinds: &BigUint, j: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..j {
        acc = acc * (kinds + i) / (i + 1);
    }
    acc
}

/// `•` becomes a parallel connection, `∘` a series connection, leaves
/// become edges.
pub fn tree_to_network(t: &UnlabeledTree) -> SpNetwork {
    match t {
        UnlabeledTree::Leaf => SpNetwork::Edge,
        UnlabeledTree::Vertex { color, children } => {
            let parts = children.iter().map(tree_to_network);
            match color {
                Color::Bullet => SpNetwork::parallel(parts),
                Color::Circ => SpNetwork::series(parts),
            }
        }
    }
}

pub fn network_to_tree(net: &SpNetwork) -> UnlabeledTree {
    match net {
        SpNetwork::Edge => UnlabeledTree::Leaf,
        SpNetwork::Parallel(cs) => UnlabeledTree::vertex(Color::Bullet, cs.iter().map(network_to_tree).collect()),
        SpNetwork::Series(cs) => UnlabeledTree::vertex(Color::Circ, cs.iter().map(network_to_tree).collect()),
    }
}
