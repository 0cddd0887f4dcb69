//! Explicit bases of `O₁ ∗ O₂` as decorated two-colored alternating trees.
//!
//! A basis tree of arity `n` is a rooted tree with leaves labeled `1..=n`,
//! internal vertices colored `•` (decorated by a basis index of `O₁(m)`) or
//! `∘` (decorated by a basis index of `O₂(m)`), every vertex with at least
//! two children and no edge between vertices of the same color.
//!
//! Canonical form sorts the children of each vertex by their smallest leaf
//! label; the planar order, when it matters, lives in the decoration. For
//! `As ∗ As` the decoration of an `m`-ary vertex is the rank of the
//! permutation taking the canonical child order to the planar one, which
//! is what lets [`graft`] work on these trees.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::comb::{factorial, orbit_count, partitions, set_partitions};
use crate::dims::OperadDims;
use crate::error::{DimsError, TreeError};
use crate::spnet::SpNetwork;

/// Largest arity for which [`count_avoiding`] enumerates trees; above it
/// the recursive count is used.
pub const ENUMERATION_LIMIT: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Bullet,
    Circ,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Bullet => Color::Circ,
            Color::Circ => Color::Bullet,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Bullet => "bullet",
            Color::Circ => "circ",
        }
    }
}

impl FromStr for Color {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bullet" | "•" => Ok(Color::Bullet),
            "circ" | "∘" => Ok(Color::Circ),
            _ => Err(TreeError::Invalid(format!("unknown color `{s}`"))),
        }
    }
}

/// Which root colors an enumeration should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootFilter {
    Bullet,
    Circ,
    Any,
}

impl RootFilter {
    fn colors(self) -> &'static [Color] {
        match self {
            RootFilter::Bullet => &[Color::Bullet],
            RootFilter::Circ => &[Color::Circ],
            RootFilter::Any => &[Color::Bullet, Color::Circ],
        }
    }
}

impl FromStr for RootFilter {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(RootFilter::Any),
            other => Ok(match other.parse::<Color>()? {
                Color::Bullet => RootFilter::Bullet,
                Color::Circ => RootFilter::Circ,
            }),
        }
    }
}

/// A basis element of `(O₁ ∗ O₂)(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColoredTree {
    Leaf(u32),
    Vertex {
        color: Color,
        decoration: u64,
        children: Vec<ColoredTree>,
    },
}

impl ColoredTree {
    /// The arity-1 identity.
    pub fn identity() -> Self {
        ColoredTree::Leaf(1)
    }

    pub fn arity(&self) -> usize {
        match self {
            ColoredTree::Leaf(_) => 1,
            ColoredTree::Vertex { children, .. } => children.iter().map(ColoredTree::arity).sum(),
        }
    }

    pub fn min_leaf(&self) -> u32 {
        match self {
            ColoredTree::Leaf(l) => *l,
            ColoredTree::Vertex { children, .. } => children.iter().map(ColoredTree::min_leaf).min().unwrap_or(0),
        }
    }

    pub fn color(&self) -> Option<Color> {
        match self {
            ColoredTree::Leaf(_) => None,
            ColoredTree::Vertex { color, .. } => Some(*color),
        }
    }

    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            ColoredTree::Leaf(l) => out.push(*l),
            ColoredTree::Vertex { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Visits every internal vertex in preorder.
    pub fn for_each_vertex(&self, f: &mut impl FnMut(&ColoredTree)) {
        if let ColoredTree::Vertex { children, .. } = self {
            f(self);
            children.iter().for_each(|c| c.for_each_vertex(f));
        }
    }

    /// Checks the basis-tree invariants: labels are `1..=n`, every vertex
    /// has at least two children, colors alternate, children are in
    /// canonical order, and each decoration is below `dim O(m)` when the
    /// dimension sequences are given.
    pub fn validate(&self, dims: Option<(&OperadDims, &OperadDims)>) -> Result<(), TreeError> {
        check_labels(self.leaves())?;
        self.validate_node(None, dims)
    }

    fn validate_node(&self, parent: Option<Color>, dims: Option<(&OperadDims, &OperadDims)>) -> Result<(), TreeError> {
        let ColoredTree::Vertex { color, decoration, children } = self else {
            return Ok(());
        };
        if children.len() < 2 {
            return Err(TreeError::Invalid("vertex with fewer than two children".into()));
        }
        if parent == Some(*color) {
            return Err(TreeError::Invalid(format!("{} vertex below a {0} vertex", color.name())));
        }
        if !children.windows(2).all(|w| w[0].min_leaf() < w[1].min_leaf()) {
            return Err(TreeError::Invalid("children are not sorted by smallest leaf".into()));
        }
        if let Some((x, y)) = dims {
            let d = match color {
                Color::Bullet => x.dim(children.len())?,
                Color::Circ => y.dim(children.len())?,
            };
            if BigUint::from(*decoration) >= d {
                return Err(TreeError::Invalid(format!("decoration {decoration} out of range for dimension {d}")));
            }
        }
        children.iter().try_for_each(|c| c.validate_node(Some(*color), dims))
    }

    /// Drops leaf labels and decorations.
    pub fn forget_labels(&self) -> UnlabeledTree {
        match self {
            ColoredTree::Leaf(_) => UnlabeledTree::Leaf,
            ColoredTree::Vertex { color, children, .. } => {
                UnlabeledTree::vertex(*color, children.iter().map(ColoredTree::forget_labels).collect())
            }
        }
    }
}

fn check_labels(mut labels: Vec<u32>) -> Result<(), TreeError> {
    labels.sort_unstable();
    if labels.iter().enumerate().all(|(i, &l)| l as usize == i + 1) {
        Ok(())
    } else {
        Err(TreeError::Invalid(format!("leaf labels {labels:?} are not 1..{}", labels.len())))
    }
}

impl fmt::Display for ColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoredTree::Leaf(l) => write!(f, "{l}"),
            ColoredTree::Vertex { color, decoration, children } => {
                write!(f, "{}[dec={decoration}](", color.name())?;
                write_children(f, children)
            }
        }
    }
}

fn write_children<T: fmt::Display>(f: &mut fmt::Formatter<'_>, children: &[T]) -> fmt::Result {
    for (i, c) in children.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str(")")
}

/// Parses `bullet[dec=K](child, …)` / `circ[dec=K](…)` with integer leaves
/// and validates the structural invariants.
impl FromStr for ColoredTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw = RawParser::parse_all(s)?;
        fn convert(r: RawTree) -> Result<ColoredTree, TreeError> {
            Ok(match r {
                RawTree::Leaf(l) => ColoredTree::Leaf(l),
                RawTree::Vertex { color, decoration, children, pos } => ColoredTree::Vertex {
                    color,
                    decoration: decoration.ok_or(TreeError::Parse { pos, message: "missing `[dec=K]`".into() })?,
                    children: children.into_iter().map(convert).collect::<Result<_, _>>()?,
                },
            })
        }
        let t = convert(raw)?;
        t.validate(None)?;
        Ok(t)
    }
}

enum RawTree {
    Leaf(u32),
    Vertex {
        color: Color,
        decoration: Option<u64>,
        children: Vec<RawTree>,
        pos: usize,
    },
}

struct RawParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> RawParser<'a> {
    fn parse_all(src: &'a str) -> Result<RawTree, TreeError> {
        let mut p = RawParser { src, pos: 0 };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(t)
    }

    fn err(&self, message: &str) -> TreeError {
        TreeError::Parse { pos: self.pos, message: message.to_string() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, TreeError> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected a number"));
        }
        let v = self.rest()[..len].parse().map_err(|_| self.err("number too large"))?;
        self.pos += len;
        Ok(v)
    }

    fn tree(&mut self) -> Result<RawTree, TreeError> {
        self.skip_ws();
        let start = self.pos;
        if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            let l = self.number()?;
            return u32::try_from(l).map(RawTree::Leaf).map_err(|_| self.err("leaf label too large"));
        }
        let color = if self.eat("bullet") {
            Color::Bullet
        } else if self.eat("circ") {
            Color::Circ
        } else {
            return Err(self.err("expected a leaf, `bullet` or `circ`"));
        };
        let decoration = if self.eat("[") {
            if !self.eat("dec=") {
                return Err(self.err("expected `dec=`"));
            }
            let d = self.number()?;
            if !self.eat("]") {
                return Err(self.err("expected `]`"));
            }
            Some(d)
        } else {
            None
        };
        if !self.eat("(") {
            return Err(self.err("expected `(`"));
        }
        let mut children = vec![self.tree()?];
        while self.eat(",") {
            children.push(self.tree()?);
        }
        if !self.eat(")") {
            return Err(self.err("expected `,` or `)`"));
        }
        Ok(RawTree::Vertex { color, decoration, children, pos: start })
    }
}

/// Per-arity dimensions of both components as machine integers, so the
/// enumerators can loop over decorations.
struct SmallDims {
    x: Vec<u64>,
    y: Vec<u64>,
}

impl SmallDims {
    fn new(x: &OperadDims, y: &OperadDims, n: usize) -> Result<Self, TreeError> {
        let conv = |d: &OperadDims| -> Result<Vec<u64>, TreeError> {
            let mut v = vec![0];
            for m in 1..=n.max(1) {
                let dm = d.dim(m)?;
                v.push(u64::try_from(&dm).map_err(|_| {
                    TreeError::Invalid(format!("dim {}({m}) = {dm} is too large to enumerate", d.name()))
                })?);
            }
            Ok(v)
        };
        Ok(SmallDims { x: conv(x)?, y: conv(y)? })
    }

    fn get(&self, color: Color, m: usize) -> u64 {
        match color {
            Color::Bullet => self.x[m],
            Color::Circ => self.y[m],
        }
    }
}

fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for prefix in &acc {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// Trees on exactly `labels` (sorted, at least two) with root `color`.
fn rooted_trees(dims: &SmallDims, labels: &[u32], color: Color) -> Vec<ColoredTree> {
    let mut out = Vec::new();
    for blocks in set_partitions(labels) {
        let m = blocks.len();
        let dim = dims.get(color, m);
        if m < 2 || dim == 0 {
            continue;
        }
        let options: Vec<Vec<ColoredTree>> = blocks
            .iter()
            .map(|b| match b.as_slice() {
                [l] => vec![ColoredTree::Leaf(*l)],
                _ => rooted_trees(dims, b, color.other()),
            })
            .collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        let combos = cartesian(&options);
        for decoration in 0..dim {
            for children in &combos {
                out.push(ColoredTree::Vertex { color, decoration, children: children.clone() });
            }
        }
    }
    out
}

/// Every canonical basis tree of `(x ∗ y)(n)` with the requested root
/// color, each exactly once, in a deterministic order. Arity 1 gives the
/// bare leaf (for `RootFilter::Any` only).
pub fn enumerate_basis(x: &OperadDims, y: &OperadDims, n: usize, root: RootFilter) -> Result<Vec<ColoredTree>, TreeError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(if root == RootFilter::Any { vec![ColoredTree::identity()] } else { Vec::new() });
    }
    let dims = SmallDims::new(x, y, n)?;
    let labels: Vec<u32> = (1..=n as u32).collect();
    Ok(root.colors().iter().flat_map(|&c| rooted_trees(&dims, &labels, c)).collect())
}

/// A local predicate on internal vertices: color plus a lower bound on the
/// number of composite (non-leaf) children, optionally of a given color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexPattern {
    pub color: Color,
    pub min_composite_children: usize,
    pub composite_child_color: Option<Color>,
}

impl VertexPattern {
    /// A `color` vertex with at least one composite child.
    pub fn composite_child(color: Color) -> Self {
        VertexPattern { color, min_composite_children: 1, composite_child_color: None }
    }

    /// Matches a vertex from its color and its children's colors (`None`
    /// for a leaf).
    pub fn matches_local(&self, color: Color, child_colors: impl IntoIterator<Item = Option<Color>>) -> bool {
        if color != self.color {
            return false;
        }
        let composite = child_colors
            .into_iter()
            .filter(|c| match (c, self.composite_child_color) {
                (None, _) => false,
                (Some(_), None) => true,
                (Some(c), Some(want)) => *c == want,
            })
            .count();
        composite >= self.min_composite_children
    }

    pub fn matches(&self, vertex: &ColoredTree) -> bool {
        match vertex {
            ColoredTree::Leaf(_) => false,
            ColoredTree::Vertex { color, children, .. } => {
                self.matches_local(*color, children.iter().map(ColoredTree::color))
            }
        }
    }
}

/// `bullet-composite-child`, `circ-composite-child`, or the general
/// `<color>-composite-children:<k>[:<child color>]`.
impl FromStr for VertexPattern {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || TreeError::UnknownPattern(s.to_string());
        if let Some(c) = s.strip_suffix("-composite-child") {
            return Ok(VertexPattern::composite_child(c.parse().map_err(|_| unknown())?));
        }
        let (c, rest) = s.split_once("-composite-children:").ok_or_else(unknown)?;
        let mut parts = rest.split(':');
        let k: usize = parts.next().and_then(|k| k.parse().ok()).ok_or_else(unknown)?;
        let child = match parts.next() {
            Some(cc) => Some(cc.parse().map_err(|_| unknown())?),
            None => None,
        };
        if parts.next().is_some() {
            return Err(unknown());
        }
        Ok(VertexPattern { color: c.parse().map_err(|_| unknown())?, min_composite_children: k, composite_child_color: child })
    }
}

impl fmt::Display for VertexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.min_composite_children, self.composite_child_color) {
            (1, None) => write!(f, "{}-composite-child", self.color.name()),
            (k, None) => write!(f, "{}-composite-children:{k}", self.color.name()),
            (k, Some(c)) => write!(f, "{}-composite-children:{k}:{}", self.color.name(), c.name()),
        }
    }
}

fn tree_avoids(t: &ColoredTree, patterns: &[VertexPattern]) -> bool {
    let mut ok = true;
    t.for_each_vertex(&mut |v| {
        if ok && patterns.iter().any(|p| p.matches(v)) {
            ok = false;
        }
    });
    ok
}

/// Number of basis trees of arity `n` in which no vertex matches any of
/// `patterns`. Enumerates and filters up to [`ENUMERATION_LIMIT`], counts
/// recursively beyond.
pub fn count_avoiding(x: &OperadDims, y: &OperadDims, n: usize, patterns: &[VertexPattern]) -> Result<BigUint, TreeError> {
    if n > ENUMERATION_LIMIT {
        return count_avoiding_recursive(x, y, n, patterns);
    }
    let trees = enumerate_basis(x, y, n, RootFilter::Any)?;
    Ok(BigUint::from(trees.iter().filter(|t| tree_avoids(t, patterns)).count()))
}

/// The same count from the dimension recursion: whether a vertex matches
/// depends only on its color and how many of its children are composite,
/// which the block-size profile `λ` determines.
pub fn count_avoiding_recursive(x: &OperadDims, y: &OperadDims, n: usize, patterns: &[VertexPattern]) -> Result<BigUint, TreeError> {
    if n == 0 {
        return Ok(BigUint::zero());
    }
    if n == 1 {
        return Ok(BigUint::from(1u32));
    }
    let xs = x.table(n)?;
    let ys = y.table(n)?;
    let mut good: HashMap<(Color, usize), BigUint> = HashMap::new();
    for k in 2..=n {
        for color in [Color::Bullet, Color::Circ] {
            let dims = if color == Color::Bullet { &xs } else { &ys };
            let mut total = BigUint::zero();
            for lam in partitions(k, 2) {
                let child_colors = lam.parts().iter().map(|&p| (p >= 2).then_some(color.other()));
                if patterns.iter().any(|p| p.matches_local(color, child_colors.clone())) {
                    continue;
                }
                let mut term = orbit_count(&lam) * &dims[lam.len()];
                for &p in lam.parts().iter().filter(|&&p| p >= 2) {
                    term *= &good[&(color.other(), p)];
                }
                total += term;
            }
            good.insert((color, k), total);
        }
    }
    Ok(&good[&(Color::Bullet, n)] + &good[&(Color::Circ, n)])
}

/// The series-parallel network of a basis tree: forget decorations and
/// labels, then read `•` as parallel and `∘` as series.
pub fn classify_by_network(t: &ColoredTree) -> SpNetwork {
    crate::spnet::tree_to_network(&t.forget_labels())
}

/// A planar tree of `As ∗ As`: the child order is the planar order and
/// there are no decorations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PlanarTree {
    Leaf(u32),
    Vertex { color: Color, children: Vec<PlanarTree> },
}

impl PlanarTree {
    pub fn arity(&self) -> usize {
        match self {
            PlanarTree::Leaf(_) => 1,
            PlanarTree::Vertex { children, .. } => children.iter().map(PlanarTree::arity).sum(),
        }
    }

    pub fn min_leaf(&self) -> u32 {
        match self {
            PlanarTree::Leaf(l) => *l,
            PlanarTree::Vertex { children, .. } => children.iter().map(PlanarTree::min_leaf).min().unwrap_or(0),
        }
    }

    pub fn color(&self) -> Option<Color> {
        match self {
            PlanarTree::Leaf(_) => None,
            PlanarTree::Vertex { color, .. } => Some(*color),
        }
    }

    /// True when no edge joins two vertices of the same color.
    pub fn is_alternating(&self) -> bool {
        match self {
            PlanarTree::Leaf(_) => true,
            PlanarTree::Vertex { color, children } => children
                .iter()
                .all(|c| c.color() != Some(*color) && c.is_alternating()),
        }
    }

    pub fn leaves(&self) -> Vec<u32> {
        match self {
            PlanarTree::Leaf(l) => vec![*l],
            PlanarTree::Vertex { children, .. } => children.iter().flat_map(PlanarTree::leaves).collect(),
        }
    }

    fn shifted(&self, by: u32) -> PlanarTree {
        match self {
            PlanarTree::Leaf(l) => PlanarTree::Leaf(l + by),
            PlanarTree::Vertex { color, children } => PlanarTree::Vertex {
                color: *color,
                children: children.iter().map(|c| c.shifted(by)).collect(),
            },
        }
    }

    /// Contracts every edge between two vertices of the same color, splicing
    /// the lower vertex's children into the upper one in place.
    fn suppressed(self) -> PlanarTree {
        match self {
            PlanarTree::Leaf(_) => self,
            PlanarTree::Vertex { color, children } => {
                let mut out = Vec::with_capacity(children.len());
                for c in children.into_iter().map(PlanarTree::suppressed) {
                    match c {
                        PlanarTree::Vertex { color: cc, children: grand } if cc == color => out.extend(grand),
                        other => out.push(other),
                    }
                }
                PlanarTree::Vertex { color, children: out }
            }
        }
    }

    /// `γ(t; t₁, …, tₙ)`: leaf `i` of `t` is replaced by `tᵢ` with its
    /// leaves shifted by `m₁ + … + m_{i-1}`, then same-color edges are
    /// suppressed.
    pub fn graft(&self, args: &[PlanarTree]) -> Result<PlanarTree, TreeError> {
        let n = self.arity();
        if args.len() != n {
            return Err(TreeError::ArityMismatch { expected: n, got: args.len() });
        }
        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0u32;
        for a in args {
            offsets.push(acc);
            acc += a.arity() as u32;
        }
        fn subst(t: &PlanarTree, args: &[PlanarTree], offsets: &[u32]) -> PlanarTree {
            match t {
                PlanarTree::Leaf(l) => {
                    let i = *l as usize - 1;
                    args[i].shifted(offsets[i])
                }
                PlanarTree::Vertex { color, children } => PlanarTree::Vertex {
                    color: *color,
                    children: children.iter().map(|c| subst(c, args, offsets)).collect(),
                },
            }
        }
        Ok(subst(self, args, &offsets).suppressed())
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf(l) => write!(f, "{l}"),
            PlanarTree::Vertex { color, children } => {
                write!(f, "{}(", color.name())?;
                write_children(f, children)
            }
        }
    }
}

/// Parses `bullet(2, 1, circ(3, 4))`; labels must be `1..=n`.
impl FromStr for PlanarTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn convert(r: RawTree) -> Result<PlanarTree, TreeError> {
            Ok(match r {
                RawTree::Leaf(l) => PlanarTree::Leaf(l),
                RawTree::Vertex { decoration: Some(_), pos, .. } => {
                    return Err(TreeError::Parse { pos, message: "planar trees carry no decoration".into() })
                }
                RawTree::Vertex { color, children, .. } => PlanarTree::Vertex {
                    color,
                    children: children.into_iter().map(convert).collect::<Result<_, _>>()?,
                },
            })
        }
        let t = convert(RawParser::parse_all(s)?)?;
        check_labels(t.leaves())?;
        if !t.is_alternating() {
            return Err(TreeError::Invalid("same-color edge".into()));
        }
        Ok(t)
    }
}

/// Lexicographic rank of a permutation of `0..m`.
fn perm_rank(perm: &[usize]) -> u64 {
    let m = perm.len();
    let mut rank: u64 = 0;
    for i in 0..m {
        let smaller = perm[i + 1..].iter().filter(|&&p| p < perm[i]).count() as u64;
        rank = rank * (m - i) as u64 + smaller;
    }
    rank
}

fn perm_unrank(mut rank: u64, m: usize) -> Vec<usize> {
    let mut digits = vec![0usize; m];
    for i in (0..m).rev() {
        let base = (m - i) as u64;
        digits[i] = (rank % base) as usize;
        rank /= base;
    }
    let mut pool: Vec<usize> = (0..m).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}

impl From<&PlanarTree> for ColoredTree {
    /// Decoration = rank of the planar order relative to the sorted order.
    fn from(t: &PlanarTree) -> Self {
        match t {
            PlanarTree::Leaf(l) => ColoredTree::Leaf(*l),
            PlanarTree::Vertex { color, children } => {
                let mut order: Vec<usize> = (0..children.len()).collect();
                order.sort_by_key(|&i| children[i].min_leaf());
                // planar slot i holds canonical child perm[i]
                let mut perm = vec![0; children.len()];
                for (canon, &planar) in order.iter().enumerate() {
                    perm[planar] = canon;
                }
                ColoredTree::Vertex {
                    color: *color,
                    decoration: perm_rank(&perm),
                    children: order.iter().map(|&i| ColoredTree::from(&children[i])).collect(),
                }
            }
        }
    }
}

impl TryFrom<&ColoredTree> for PlanarTree {
    type Error = TreeError;

    /// Reads the decoration of an `As ∗ As` tree as a planar order; fails if
    /// a decoration is not below `m!`.
    fn try_from(t: &ColoredTree) -> Result<Self, Self::Error> {
        match t {
            ColoredTree::Leaf(l) => Ok(PlanarTree::Leaf(*l)),
            ColoredTree::Vertex { color, decoration, children } => {
                let m = children.len();
                if BigUint::from(*decoration) >= factorial(m) {
                    return Err(TreeError::Invalid(format!("decoration {decoration} is not a permutation rank of {m} children")));
                }
                let perm = perm_unrank(*decoration, m);
                let mut out = Vec::with_capacity(m);
                for p in perm {
                    out.push(PlanarTree::try_from(&children[p])?);
                }
                Ok(PlanarTree::Vertex { color: *color, children: out })
            }
        }
    }
}

/// Operadic composition in `As ∗ As` on canonical basis trees.
pub fn graft(t: &ColoredTree, args: &[ColoredTree]) -> Result<ColoredTree, TreeError> {
    let planar = PlanarTree::try_from(t)?;
    let planar_args = args.iter().map(PlanarTree::try_from).collect::<Result<Vec<_>, _>>()?;
    Ok(ColoredTree::from(&planar.graft(&planar_args)?))
}

/// A basis tree of `Com-As ∗ Com-As` on one generator: leaves carry no
/// labels and children form a multiset, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UnlabeledTree {
    Leaf,
    Vertex { color: Color, children: Vec<UnlabeledTree> },
}

impl UnlabeledTree {
    /// Builds a vertex, sorting the children into canonical order.
    pub fn vertex(color: Color, mut children: Vec<UnlabeledTree>) -> Self {
        children.sort();
        UnlabeledTree::Vertex { color, children }
    }

    pub fn size(&self) -> usize {
        match self {
            UnlabeledTree::Leaf => 1,
            UnlabeledTree::Vertex { children, .. } => children.iter().map(UnlabeledTree::size).sum(),
        }
    }

    fn kind(&self) -> u8 {
        match self {
            UnlabeledTree::Leaf => 0,
            UnlabeledTree::Vertex { color: Color::Bullet, .. } => 1,
            UnlabeledTree::Vertex { color: Color::Circ, .. } => 2,
        }
    }

    fn children(&self) -> &[UnlabeledTree] {
        match self {
            UnlabeledTree::Leaf => &[],
            UnlabeledTree::Vertex { children, .. } => children,
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            UnlabeledTree::Leaf => true,
            UnlabeledTree::Vertex { color, children } => {
                children.len() >= 2
                    && children.windows(2).all(|w| w[0] <= w[1])
                    && children.iter().all(|c| match c {
                        UnlabeledTree::Leaf => true,
                        UnlabeledTree::Vertex { color: cc, .. } => cc != color && c.is_canonical(),
                    })
            }
        }
    }
}

/// Size, then kind (leaf < `•` < `∘`), then children.
impl Ord for UnlabeledTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.kind().cmp(&other.kind()))
            .then_with(|| self.children().cmp(other.children()))
    }
}

impl PartialOrd for UnlabeledTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for UnlabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnlabeledTree::Leaf => f.write_str("*"),
            UnlabeledTree::Vertex { color, children } => {
                write!(f, "{}(", color.name())?;
                write_children(f, children)
            }
        }
    }
}

/// All unlabeled alternating trees with `n` leaves, ascending.
pub fn enumerate_unlabeled(n: usize, root: RootFilter) -> Vec<UnlabeledTree> {
    fn rooted(n: usize, color: Color, memo: &mut HashMap<(usize, Color), Vec<UnlabeledTree>>) -> Vec<UnlabeledTree> {
        if let Some(v) = memo.get(&(n, color)) {
            return v.clone();
        }
        let mut candidates = vec![UnlabeledTree::Leaf];
        for k in 2..n {
            candidates.extend(rooted(k, color.other(), memo));
        }
        candidates.sort();
        let mut out = Vec::new();
        pick(&candidates, 0, n, &mut Vec::new(), color, &mut out);
        out.sort();
        memo.insert((n, color), out.clone());
        out
    }

    fn pick(cands: &[UnlabeledTree], start: usize, rest: usize, cur: &mut Vec<UnlabeledTree>, color: Color, out: &mut Vec<UnlabeledTree>) {
        if rest == 0 {
            if cur.len() >= 2 {
                out.push(UnlabeledTree::Vertex { color, children: cur.clone() });
            }
            return;
        }
        for (i, c) in cands.iter().enumerate().skip(start) {
            let s = c.size();
            if s > rest {
                break;
            }
            cur.push(c.clone());
            pick(cands, i, rest - s, cur, color, out);
            cur.pop();
        }
    }

    match n {
        0 => Vec::new(),
        1 if root == RootFilter::Any => vec![UnlabeledTree::Leaf],
        1 => Vec::new(),
        _ => {
            let mut memo = HashMap::new();
            let mut out: Vec<UnlabeledTree> = root.colors().iter().flat_map(|&c| rooted(n, c, &mut memo)).collect();
            out.sort();
            out
        }
    }
}

/// Number of trees with a given root color and arity, as the dims engine
/// needs it; exposed for cross-checks.
pub fn basis_size(x: &OperadDims, y: &OperadDims, n: usize) -> Result<BigUint, DimsError> {
    if n == 1 {
        return Ok(BigUint::from(1u32));
    }
    Ok(crate::dims::free_product_dims(x, y, n)?.total(n).cloned().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::free_product_dims;
    use std::collections::{BTreeMap, BTreeSet};

    fn od(id: &str) -> OperadDims {
        OperadDims::named(id).unwrap()
    }

    fn pt(s: &str) -> PlanarTree {
        s.parse().unwrap()
    }

    #[test]
    fn lie_com_as_basis_sizes() {
        let (lie, comas) = (od("lie"), od("com-as"));
        assert_eq!(enumerate_basis(&lie, &comas, 4, RootFilter::Any).unwrap().len(), 67);
        assert_eq!(enumerate_basis(&lie, &comas, 3, RootFilter::Bullet).unwrap().len(), 5);
        assert_eq!(enumerate_basis(&lie, &comas, 3, RootFilter::Circ).unwrap().len(), 4);
        let one = enumerate_basis(&lie, &comas, 1, RootFilter::Any).unwrap();
        assert_eq!(one, vec![ColoredTree::identity()]);
        assert!(enumerate_basis(&lie, &comas, 1, RootFilter::Bullet).unwrap().is_empty());
    }

    #[test]
    fn enumeration_is_valid_and_distinct() {
        let (a, b) = (od("as"), od("lie"));
        let trees = enumerate_basis(&a, &b, 4, RootFilter::Any).unwrap();
        let set: BTreeSet<_> = trees.iter().collect();
        assert_eq!(set.len(), trees.len());
        for t in &trees {
            t.validate(Some((&a, &b))).unwrap();
            assert_eq!(t.arity(), 4);
        }
        let table = free_product_dims(&a, &b, 4).unwrap();
        assert_eq!(BigUint::from(trees.len()), *table.total(4).unwrap());
    }

    #[test]
    fn serialization_round_trip() {
        let (a, b) = (od("as"), od("com-as"));
        for t in enumerate_basis(&a, &b, 4, RootFilter::Any).unwrap() {
            let s = t.to_string();
            let back: ColoredTree = s.parse().unwrap();
            assert_eq!(back, t);
            assert_eq!(back.to_string(), s);
        }
        let t: ColoredTree = "bullet[dec=1](circ[dec=0](1, 3), 2)".parse().unwrap();
        assert_eq!(t.arity(), 3);
    }

    #[test]
    fn parser_rejects_invalid_trees() {
        for bad in [
            "bullet[dec=0](1)",
            "bullet[dec=0](bullet[dec=0](1, 2), 3)",
            "bullet[dec=0](2, 1)",
            "bullet[dec=0](1, 3)",
            "bullet(1, 2)",
            "bullet[dec=0](1, 2",
            "square[dec=0](1, 2)",
            "bullet[dec=0](1, 2) x",
        ] {
            assert!(bad.parse::<ColoredTree>().is_err(), "{bad}");
        }
        let e = "bullet[dec=0](1, 2".parse::<ColoredTree>().unwrap_err();
        assert!(matches!(e, TreeError::Parse { .. }));
    }

    #[test]
    fn decoration_range_is_checked() {
        let t: ColoredTree = "bullet[dec=2](1, 2)".parse().unwrap();
        assert!(t.validate(Some((&od("as"), &od("as")))).is_err());
        assert!(t.validate(Some((&od("nov"), &od("as")))).is_err());
        let ok: ColoredTree = "bullet[dec=1](1, 2)".parse().unwrap();
        ok.validate(Some((&od("nov"), &od("as")))).unwrap();
    }

    #[test]
    fn graft_picture_example() {
        let t = pt("bullet(2, 1, 3)");
        let args = [pt("1"), pt("circ(2, 1)"), pt("bullet(1, 2)")];
        let out = t.graft(&args).unwrap();
        assert_eq!(out.to_string(), "bullet(circ(3, 2), 1, 4, 5)");
    }

    #[test]
    fn graft_merges_same_colors() {
        let t = pt("bullet(1, 2)");
        let out = t.graft(&[pt("bullet(1, 2)"), pt("1")]).unwrap();
        assert_eq!(out, pt("bullet(1, 2, 3)"));
        let out = t.graft(&[pt("circ(1, 2)"), pt("1")]).unwrap();
        assert_eq!(out, pt("bullet(circ(1, 2), 3)"));
    }

    #[test]
    fn graft_identity_and_errors() {
        let t = pt("circ(bullet(3, 1), 2)");
        let ids = vec![pt("1"); 3];
        assert_eq!(t.graft(&ids).unwrap(), t);
        assert_eq!(pt("1").graft(std::slice::from_ref(&t)).unwrap(), t);
        assert_eq!(
            t.graft(&[pt("1")]).unwrap_err(),
            TreeError::ArityMismatch { expected: 3, got: 1 }
        );
    }

    #[test]
    fn colored_graft_matches_planar() {
        let t = pt("bullet(2, 1, 3)");
        let args = [pt("1"), pt("circ(2, 1)"), pt("bullet(1, 2)")];
        let ct = ColoredTree::from(&t);
        let cargs: Vec<ColoredTree> = args.iter().map(ColoredTree::from).collect();
        let got = graft(&ct, &cargs).unwrap();
        assert_eq!(PlanarTree::try_from(&got).unwrap(), t.graft(&args).unwrap());
        got.validate(Some((&od("as"), &od("as")))).unwrap();
    }

    #[test]
    fn permutation_ranks_round_trip() {
        for m in 1..=5 {
            let mut seen = BTreeSet::new();
            for r in 0..(1..=m as u64).product::<u64>() {
                let p = perm_unrank(r, m);
                assert_eq!(perm_rank(&p), r);
                seen.insert(p);
            }
            assert_eq!(seen.len() as u64, (1..=m as u64).product::<u64>());
        }
        assert_eq!(perm_unrank(0, 3), vec![0, 1, 2]);
    }

    #[test]
    fn planar_and_colored_views_agree() {
        let (a, b) = (od("as"), od("as"));
        let trees = enumerate_basis(&a, &b, 4, RootFilter::Any).unwrap();
        assert_eq!(trees.len(), 528);
        for t in &trees {
            let p = PlanarTree::try_from(t).unwrap();
            assert_eq!(&ColoredTree::from(&p), t);
        }
    }

    #[test]
    fn poisson_counts() {
        let (lie, comas) = (od("lie"), od("com-as"));
        let pat = [VertexPattern::composite_child(Color::Bullet)];
        assert_eq!(count_avoiding(&lie, &comas, 3, &pat).unwrap(), BigUint::from(6u32));
        assert_eq!(count_avoiding(&lie, &comas, 4, &pat).unwrap(), BigUint::from(24u32));
        assert_eq!(count_avoiding(&lie, &comas, 4, &[]).unwrap(), BigUint::from(67u32));
        assert_eq!(count_avoiding(&lie, &comas, 8, &pat).unwrap(), BigUint::from(40320u32));
    }

    #[test]
    fn avoiding_enumeration_matches_recursion() {
        let patterns = [
            vec![],
            vec![VertexPattern::composite_child(Color::Bullet)],
            vec![VertexPattern::composite_child(Color::Circ)],
            vec!["bullet-composite-children:2".parse().unwrap()],
            vec!["circ-composite-children:1:bullet".parse().unwrap(), VertexPattern::composite_child(Color::Bullet)],
        ];
        let (x, y) = (OperadDims::from_u64s("x", &[1, 2, 1, 3, 2]), OperadDims::from_u64s("y", &[2, 0, 1, 1, 3]));
        for pats in &patterns {
            for n in 1..=5 {
                let e = count_avoiding(&x, &y, n, pats).unwrap();
                let r = count_avoiding_recursive(&x, &y, n, pats).unwrap();
                assert_eq!(e, r, "n = {n}, {pats:?}");
            }
        }
    }

    #[test]
    fn pattern_names() {
        let p: VertexPattern = "bullet-composite-child".parse().unwrap();
        assert_eq!(p, VertexPattern::composite_child(Color::Bullet));
        assert_eq!(p.to_string(), "bullet-composite-child");
        let q: VertexPattern = "circ-composite-children:2:bullet".parse().unwrap();
        assert_eq!(q.to_string(), "circ-composite-children:2:bullet");
        assert!("green-composite-child".parse::<VertexPattern>().is_err());
        assert!("bullet-leafy".parse::<VertexPattern>().is_err());
    }

    #[test]
    fn networks_of_small_trees() {
        let t: ColoredTree = "bullet[dec=0](1, 2)".parse().unwrap();
        assert_eq!(classify_by_network(&t).to_string(), "P(e e)");
        let t: ColoredTree = "circ[dec=0](1, 2)".parse().unwrap();
        assert_eq!(classify_by_network(&t).to_string(), "S(e e)");
        let comas = od("com-as");
        let nets: BTreeSet<SpNetwork> = enumerate_basis(&comas, &comas, 4, RootFilter::Any)
            .unwrap()
            .iter()
            .map(classify_by_network)
            .collect();
        assert_eq!(nets.len(), 10);
    }

    #[test]
    fn fibers_partition_the_basis() {
        let (x, y) = (od("lie"), od("com-as"));
        for n in 2..=6 {
            let trees = enumerate_basis(&x, &y, n, RootFilter::Any).unwrap();
            let mut fibers: BTreeMap<SpNetwork, usize> = BTreeMap::new();
            for t in &trees {
                *fibers.entry(classify_by_network(t)).or_default() += 1;
            }
            assert_eq!(fibers.values().sum::<usize>(), trees.len());
            assert_eq!(BigUint::from(fibers.len()), crate::spnet::macmahon(n));
        }
    }

    #[test]
    fn unlabeled_counts() {
        let want = [1usize, 2, 4, 10, 24, 66, 180, 522];
        for (i, w) in want.iter().enumerate() {
            let trees = enumerate_unlabeled(i + 1, RootFilter::Any);
            assert_eq!(trees.len(), *w);
            assert!(trees.iter().all(UnlabeledTree::is_canonical));
        }
        assert_eq!(enumerate_unlabeled(3, RootFilter::Bullet).len(), 2);
    }

    #[test]
    fn basis_size_matches() {
        assert_eq!(basis_size(&od("as"), &od("as"), 5).unwrap(), BigUint::from(10800u32));
        assert_eq!(basis_size(&od("as"), &od("as"), 1).unwrap(), BigUint::from(1u32));
    }
}
