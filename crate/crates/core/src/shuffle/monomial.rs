//! Shuffle-tree monomials and the path-lexicographic order.
//!
//! A monomial is a planar tree whose internal vertices carry generator
//! symbols and whose leaves carry the labels `1..=n`, subject to the
//! shuffle condition: the minimal leaves of the children of every vertex
//! increase from left to right. Text syntax is `x(x(1 2) 3)`.
//!
//! Order, from most to least significant:
//! 1. arity;
//! 2. the words of symbols read from the root down to leaf 1, leaf 2, …,
//!    compared leaf by leaf, each pair of words by length first (longer is
//!    larger) and then lexicographically by symbol;
//! 3. the planar sequence of leaf labels, lexicographically;
//! 4. the trees themselves, structurally.
//!
//! Symbols compare in reverse alphabetical order of their names, so `x`
//! ranks above `y`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::comb::set_partitions;
use crate::error::ShuffleError;

/// A generator name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The raw tree underneath a monomial. Invariants are only guaranteed once
/// wrapped in a [`ShuffleMonomial`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf(u32),
    Op { sym: Symbol, children: Vec<Node> },
}

impl Node {
    pub fn op(sym: &Symbol, children: Vec<Node>) -> Node {
        Node::Op { sym: sym.clone(), children }
    }

    pub fn arity(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Op { children, .. } => children.iter().map(Node::arity).sum(),
        }
    }

    pub fn min_leaf(&self) -> u32 {
        match self {
            Node::Leaf(l) => *l,
            // the shuffle condition puts the minimum in the first child
            Node::Op { children, .. } => children[0].min_leaf(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf(_))
    }

    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            Node::Leaf(l) => out.push(*l),
            Node::Op { children, .. } => children.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// The subtree at `path` (child indices from the root).
    pub fn at(&self, path: &[usize]) -> &Node {
        path.iter().fold(self, |n, &i| match n {
            Node::Op { children, .. } => &children[i],
            Node::Leaf(_) => panic!("path runs through a leaf"),
        })
    }

    /// A copy with the subtree at `path` replaced by `new`.
    pub fn replaced(&self, path: &[usize], new: Node) -> Node {
        match path.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Node::Op { sym, children } => {
                    let mut children = children.clone();
                    children[i] = children[i].replaced(rest, new);
                    Node::Op { sym: sym.clone(), children }
                }
                Node::Leaf(_) => panic!("path runs through a leaf"),
            },
        }
    }

    /// Relabels leaves through `map` (indexed by old label).
    pub fn relabeled(&self, map: &[u32]) -> Node {
        match self {
            Node::Leaf(l) => Node::Leaf(map[*l as usize]),
            Node::Op { sym, children } => Node::Op {
                sym: sym.clone(),
                children: children.iter().map(|c| c.relabeled(map)).collect(),
            },
        }
    }

    /// Internal vertices in preorder, as paths.
    pub fn vertex_paths(&self) -> Vec<Vec<usize>> {
        fn go(n: &Node, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if let Node::Op { children, .. } = n {
                out.push(path.clone());
                for (i, c) in children.iter().enumerate() {
                    path.push(i);
                    go(c, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    fn check_shuffle(&self) -> Result<(), ShuffleError> {
        if let Node::Op { children, .. } = self {
            let minima: Vec<u32> = children.iter().map(|c| c.leaves().into_iter().min().unwrap_or(0)).collect();
            if children.is_empty() || !minima.windows(2).all(|w| w[0] < w[1]) {
                return Err(ShuffleError::ShuffleCondition { vertex: self.to_string(), minima });
            }
            children.iter().try_for_each(Node::check_shuffle)?;
        }
        Ok(())
    }

    fn collect_symbols(&self, out: &mut BTreeMap<Symbol, usize>) -> Result<(), ShuffleError> {
        if let Node::Op { sym, children } = self {
            let k = children.len();
            if let Some(&first) = out.get(sym) {
                if first != k {
                    return Err(ShuffleError::SymbolArity { symbol: sym.to_string(), first, second: k });
                }
            }
            out.insert(sym.clone(), k);
            children.iter().try_for_each(|c| c.collect_symbols(out))?;
        }
        Ok(())
    }

    fn paths_into(&self, prefix: &mut Vec<Symbol>, words: &mut [Vec<Symbol>], seq: &mut Vec<u32>) {
        match self {
            Node::Leaf(l) => {
                words[*l as usize - 1] = prefix.clone();
                seq.push(*l);
            }
            Node::Op { sym, children } => {
                prefix.push(sym.clone());
                children.iter().for_each(|c| c.paths_into(prefix, words, seq));
                prefix.pop();
            }
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf(l) => write!(f, "{l}"),
            Node::Op { sym, children } => {
                write!(f, "{sym}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A path word: compared by length first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Word(Vec<Symbol>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug)]
struct Inner {
    node: Node,
    words: Vec<Word>,
    leaf_sequence: Vec<u32>,
}

/// A validated shuffle tree; cheap to clone.
#[derive(Debug, Clone)]
pub struct ShuffleMonomial(Arc<Inner>);

impl ShuffleMonomial {
    /// Validates labels (`1..=n`, each once) and the shuffle condition.
    pub fn new(node: Node) -> Result<Self, ShuffleError> {
        let mut labels = node.leaves();
        labels.sort_unstable();
        if !labels.iter().enumerate().all(|(i, &l)| l as usize == i + 1) {
            return Err(ShuffleError::Labels { arity: labels.len(), labels: node.leaves() });
        }
        node.check_shuffle()?;
        node.collect_symbols(&mut BTreeMap::new())?;
        Ok(Self::from_valid(node))
    }

    pub(crate) fn from_valid(node: Node) -> Self {
        let n = node.arity();
        let mut words = vec![Vec::new(); n];
        let mut leaf_sequence = Vec::with_capacity(n);
        node.paths_into(&mut Vec::new(), &mut words, &mut leaf_sequence);
        debug_assert!(node.check_shuffle().is_ok(), "not a shuffle tree: {node}");
        ShuffleMonomial(Arc::new(Inner {
            node,
            words: words.into_iter().map(Word).collect(),
            leaf_sequence,
        }))
    }

    /// The generator monomial `sym(1 2 … k)`.
    pub fn generator(sym: &Symbol, arity: usize) -> Self {
        Self::from_valid(Node::op(sym, (1..=arity as u32).map(Node::Leaf).collect()))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn arity(&self) -> usize {
        self.0.leaf_sequence.len()
    }

    /// Symbols with their arities.
    pub fn symbols(&self) -> BTreeMap<Symbol, usize> {
        let mut out = BTreeMap::new();
        self.node().collect_symbols(&mut out).expect("validated on construction");
        out
    }

    /// Number of internal vertices.
    pub fn degree(&self) -> usize {
        self.node().vertex_paths().len()
    }
}

impl PartialEq for ShuffleMonomial {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.node == other.0.node
    }
}

impl Eq for ShuffleMonomial {}

impl Hash for ShuffleMonomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.node.hash(state);
    }
}

impl Ord for ShuffleMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (&*self.0, &*other.0);
        a.leaf_sequence
            .len()
            .cmp(&b.leaf_sequence.len())
            .then_with(|| a.words.cmp(&b.words))
            .then_with(|| a.leaf_sequence.cmp(&b.leaf_sequence))
            .then_with(|| a.node.cmp(&b.node))
    }
}

impl PartialOrd for ShuffleMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares two monomials of the same arity.
pub fn compare(a: &ShuffleMonomial, b: &ShuffleMonomial) -> Result<Ordering, ShuffleError> {
    if a.arity() != b.arity() {
        return Err(ShuffleError::ArityMismatch(a.arity(), b.arity()));
    }
    Ok(a.cmp(b))
}

impl fmt::Display for ShuffleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.node.fmt(f)
    }
}

impl FromStr for ShuffleMonomial {
    type Err = ShuffleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_monomial(s)
    }
}

pub fn parse_monomial(text: &str) -> Result<ShuffleMonomial, ShuffleError> {
    let mut p = Parser::new(text);
    let node = p.node()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    ShuffleMonomial::new(node)
}

/// Tokenizer shared by the monomial and element grammars.
pub(crate) struct Parser<'a> {
    src: &'a str,
    pub(crate) pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn skip_ws(&mut self) {
        let t = self.rest().trim_start();
        self.pos = self.src.len() - t.len();
    }

    pub(crate) fn error(&self, message: &str) -> ShuffleError {
        ShuffleError::Syntax { pos: self.pos, message: message.to_string() }
    }

    pub(crate) fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let len = rest.find(|c: char| !f(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    pub(crate) fn node(&mut self) -> Result<Node, ShuffleError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.take_while(|c| c.is_ascii_digit());
                digits.parse().map(Node::Leaf).map_err(|_| ShuffleError::Syntax {
                    pos: start,
                    message: "leaf label too large".into(),
                })
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                if self.peek() != Some('(') {
                    return Err(self.error("expected `(` after symbol"));
                }
                self.pos += 1;
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        None => return Err(self.error("unclosed `(`")),
                        _ => children.push(self.node()?),
                    }
                }
                if children.is_empty() {
                    return Err(self.error("a vertex needs at least one argument"));
                }
                Ok(Node::Op { sym: Symbol::new(name), children })
            }
            Some(_) => Err(self.error("expected a symbol or a leaf label")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Every shuffle tree with leaves `1..=n` over `alphabet` (symbol, arity),
/// in ascending order.
pub fn enumerate_shuffle_trees(alphabet: &[(Symbol, usize)], n: usize) -> Vec<ShuffleMonomial> {
    let mut out: Vec<ShuffleMonomial> = trees_on(alphabet, n).into_iter().map(ShuffleMonomial::from_valid).collect();
    out.sort();
    out
}

/// All shuffle trees on `1..=n`, memoized by size and relabeled onto
/// blocks.
pub(crate) fn trees_on(alphabet: &[(Symbol, usize)], n: usize) -> Vec<Node> {
    let mut memo: Vec<Vec<Node>> = vec![Vec::new(), vec![Node::Leaf(1)]];
    for k in 2..=n {
        let level = build_level(alphabet, k, &memo, |_| true);
        memo.push(level);
    }
    if n == 0 {
        Vec::new()
    } else {
        memo.swap_remove(n)
    }
}

/// Trees on `1..=k` whose root is some alphabet symbol and whose children
/// are relabeled copies of `memo` entries, filtered by `keep`.
pub(crate) fn build_level(
    alphabet: &[(Symbol, usize)],
    k: usize,
    memo: &[Vec<Node>],
    mut keep: impl FnMut(&Node) -> bool,
) -> Vec<Node> {
    let labels: Vec<u32> = (1..=k as u32).collect();
    let partitions = set_partitions(&labels);
    let mut out = Vec::new();
    for (sym, arity) in alphabet {
        for blocks in partitions.iter().filter(|b| b.len() == *arity) {
            let options: Vec<Vec<Node>> = blocks
                .iter()
                .map(|b| {
                    let mut map = vec![0u32; b.len() + 1];
                    for (i, &l) in b.iter().enumerate() {
                        map[i + 1] = l;
                    }
                    memo[b.len()].iter().map(|t| t.relabeled(&map)).collect()
                })
                .collect();
            let mut idx = vec![0usize; options.len()];
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            loop {
                let children = idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
                let node = Node::op(sym, children);
                if keep(&node) {
                    out.push(node);
                }
                let mut pos = options.len();
                let exhausted = loop {
                    if pos == 0 {
                        break true;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < options[pos].len() {
                        break false;
                    }
                    idx[pos] = 0;
                };
                if exhausted {
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::{free_product_dims, OperadDims};
    use num_bigint::BigUint;

    fn m(s: &str) -> ShuffleMonomial {
        s.parse().unwrap()
    }

    fn xy() -> Vec<(Symbol, usize)> {
        vec![(Symbol::new("x"), 2), (Symbol::new("y"), 2)]
    }

    #[test]
    fn parse_and_print() {
        let t = m("x(x(1 2) 3)");
        assert_eq!(t.arity(), 3);
        assert_eq!(t.to_string(), "x(x(1 2) 3)");
        assert_eq!(m("  x( 1   2 ) ").to_string(), "x(1 2)");
        assert_eq!(m("x(1 2)"), ShuffleMonomial::generator(&Symbol::new("x"), 2));
        assert_eq!(m("1").arity(), 1);
    }

    #[test]
    fn parse_errors_are_distinct() {
        assert!(matches!(
            "x(x(2 3) 1)".parse::<ShuffleMonomial>(),
            Err(ShuffleError::ShuffleCondition { .. })
        ));
        assert!(matches!("x(1 2".parse::<ShuffleMonomial>(), Err(ShuffleError::Syntax { pos: 5, .. })));
        assert!(matches!("x(1 3)".parse::<ShuffleMonomial>(), Err(ShuffleError::Labels { .. })));
        assert!(matches!("x(1 1)".parse::<ShuffleMonomial>(), Err(ShuffleError::Labels { .. })));
        assert!(matches!("x(1 x(2 3 4))".parse::<ShuffleMonomial>(), Err(ShuffleError::SymbolArity { .. })));
        assert!(matches!("x 1 2".parse::<ShuffleMonomial>(), Err(ShuffleError::Syntax { .. })));
        assert!(matches!("x(1 2) 3".parse::<ShuffleMonomial>(), Err(ShuffleError::Syntax { .. })));
        assert!(matches!("x()".parse::<ShuffleMonomial>(), Err(ShuffleError::Syntax { .. })));
    }

    #[test]
    fn leading_monomial_facts() {
        let lead = m("x(x(1 2) 3)");
        assert!(lead > m("x(x(1 3) 2)"));
        assert!(lead > m("x(1 x(2 3))"));
        assert!(lead > m("y(y(1 3) 2)"));
        for t in enumerate_shuffle_trees(&xy(), 3) {
            assert!(t <= lead, "{t}");
        }
        assert_eq!(compare(&lead, &lead).unwrap(), Ordering::Equal);
        assert!(compare(&lead, &m("x(1 2)")).is_err());
    }

    #[test]
    fn symbol_precedence() {
        assert!(Symbol::new("x") > Symbol::new("y"));
        assert!(m("x(1 2)") > m("y(1 2)"));
    }

    #[test]
    fn enumeration_counts() {
        let x = vec![(Symbol::new("x"), 2)];
        assert_eq!(enumerate_shuffle_trees(&x, 2), vec![m("x(1 2)")]);
        assert_eq!(enumerate_shuffle_trees(&xy(), 2).len(), 2);
        assert_eq!(enumerate_shuffle_trees(&xy(), 3).len(), 12);
        let (com, anti) = (OperadDims::named("com").unwrap(), OperadDims::named("anti-com").unwrap());
        let table = free_product_dims(&com, &anti, 6).unwrap();
        for n in 1..=6 {
            let trees = enumerate_shuffle_trees(&xy(), n);
            assert_eq!(BigUint::from(trees.len()), table.total(n).cloned().unwrap());
            assert!(trees.windows(2).all(|w| w[0] < w[1]));
        }
        // one binary generator: (2n-3)!!
        assert_eq!(enumerate_shuffle_trees(&x, 4).len(), 15);
        assert_eq!(enumerate_shuffle_trees(&x, 5).len(), 105);
        let ternary = vec![(Symbol::new("t"), 3)];
        assert_eq!(enumerate_shuffle_trees(&ternary, 5).len(), 10);
    }

    #[test]
    fn enumerated_trees_are_valid() {
        for t in enumerate_shuffle_trees(&xy(), 5) {
            let again = m(&t.to_string());
            assert_eq!(again, t);
            assert_eq!(again.cmp(&t), Ordering::Equal);
        }
    }
}
