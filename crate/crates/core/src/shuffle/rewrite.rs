//! Divisors, oriented rewrite rules and reduction to normal form.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use rand::RngCore;

use super::element::{parse_element, ShuffleElement};
use super::monomial::{Node, Parser, ShuffleMonomial};
use crate::error::ShuffleError;

/// An occurrence of a pattern inside a monomial, located by the path from
/// the root of the monomial to the vertex matching the pattern root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub position: Vec<usize>,
}

impl Embedding {
    /// Vertices of the host monomial covered by the occurrence of `pattern`.
    pub fn vertices(&self, pattern: &ShuffleMonomial) -> Vec<Vec<usize>> {
        pattern
            .node()
            .vertex_paths()
            .into_iter()
            .map(|p| self.position.iter().chain(&p).copied().collect())
            .collect()
    }
}

fn match_shape<'a>(pattern: &Node, target: &'a Node, slots: &mut [Option<&'a Node>]) -> bool {
    match (pattern, target) {
        (Node::Leaf(l), _) => {
            slots[*l as usize - 1] = Some(target);
            true
        }
        (Node::Op { sym: ps, children: pc }, Node::Op { sym: ts, children: tc }) => {
            ps == ts && pc.len() == tc.len() && pc.iter().zip(tc).all(|(p, t)| match_shape(p, t, slots))
        }
        _ => false,
    }
}

/// The subtrees filling the leaves of `pattern` when it occurs with its
/// root at `target`, in pattern-label order; `None` if it does not occur
/// there. An occurrence needs equal shapes and symbols, and the minimal
/// leaves of the slots must increase with the pattern labels.
pub(crate) fn slots_at<'a>(pattern: &ShuffleMonomial, target: &'a Node) -> Option<Vec<&'a Node>> {
    let mut slots = vec![None; pattern.arity()];
    if !match_shape(pattern.node(), target, &mut slots) {
        return None;
    }
    let slots: Vec<&Node> = slots.into_iter().map(|s| s.expect("every label occurs")).collect();
    slots
        .windows(2)
        .all(|w| w[0].min_leaf() < w[1].min_leaf())
        .then_some(slots)
}

/// Whether `pattern` occurs with its root at `target`.
pub fn occurs_at(pattern: &ShuffleMonomial, target: &Node) -> bool {
    slots_at(pattern, target).is_some()
}

/// Leftmost-outermost occurrence of `lhs` in `m`: the first vertex in
/// preorder where it occurs.
pub fn find_divisor(m: &ShuffleMonomial, lhs: &ShuffleMonomial) -> Option<Embedding> {
    if lhs.arity() > m.arity() {
        return None;
    }
    m.node()
        .vertex_paths()
        .into_iter()
        .find(|p| occurs_at(lhs, m.node().at(p)))
        .map(|position| Embedding { position })
}

/// Every occurrence of `lhs` in `m`, in preorder.
pub fn find_all_divisors(m: &ShuffleMonomial, lhs: &ShuffleMonomial) -> Vec<Embedding> {
    if lhs.arity() > m.arity() {
        return Vec::new();
    }
    m.node()
        .vertex_paths()
        .into_iter()
        .filter(|p| occurs_at(lhs, m.node().at(p)))
        .map(|position| Embedding { position })
        .collect()
}

fn fill(pattern: &Node, slots: &[&Node]) -> Node {
    match pattern {
        Node::Leaf(l) => slots[*l as usize - 1].clone(),
        Node::Op { sym, children } => Node::op(sym, children.iter().map(|c| fill(c, slots)).collect()),
    }
}

/// `m` with the occurrence of `pattern` at `at` replaced by `replacement`,
/// whose leaf `j` receives the subtree that filled leaf `j` of `pattern`.
pub fn substitute(
    m: &ShuffleMonomial,
    at: &Embedding,
    pattern: &ShuffleMonomial,
    replacement: &ShuffleMonomial,
) -> Option<ShuffleMonomial> {
    if pattern.arity() != replacement.arity() {
        return None;
    }
    let slots = slots_at(pattern, m.node().at(&at.position))?;
    let new = fill(replacement.node(), &slots);
    Some(ShuffleMonomial::from_valid(m.node().replaced(&at.position, new)))
}

/// `lhs → rhs` with every monomial of `rhs` below `lhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    lhs: ShuffleMonomial,
    rhs: ShuffleElement,
}

impl RewriteRule {
    /// Orients the relation `e = 0` by its leading monomial.
    pub fn from_element(e: &ShuffleElement) -> Result<Self, ShuffleError> {
        let (lead, c) = e.leading().ok_or(ShuffleError::Unorientable)?;
        let lhs = lead.clone();
        let scale = -c.recip();
        let mut rhs = ShuffleElement::zero();
        for (m, d) in e.terms().skip(1) {
            rhs.add_term(m.clone(), d * &scale);
        }
        Ok(RewriteRule { lhs, rhs })
    }

    /// Orients the equation `a = b`.
    pub fn from_equation(a: &ShuffleElement, b: &ShuffleElement) -> Result<Self, ShuffleError> {
        if let (Some(x), Some(y)) = (a.arity(), b.arity()) {
            if x != y {
                return Err(ShuffleError::ArityMismatch(x, y));
            }
        }
        Self::from_element(&a.sub(b))
    }

    pub fn lhs(&self) -> &ShuffleMonomial {
        &self.lhs
    }

    pub fn rhs(&self) -> &ShuffleElement {
        &self.rhs
    }

    /// The relation `lhs - rhs` as an element.
    pub fn as_element(&self) -> ShuffleElement {
        let mut e = ShuffleElement::monomial(self.lhs.clone());
        e.add_scaled(&self.rhs, &-BigRational::one());
        e
    }

    /// One rewrite of `m` at the occurrence `at` of the left-hand side.
    pub fn apply(&self, m: &ShuffleMonomial, at: &Embedding) -> ShuffleElement {
        let slots = slots_at(&self.lhs, m.node().at(&at.position)).expect("embedding of the left-hand side");
        let mut out = ShuffleElement::zero();
        for (r, c) in self.rhs.terms() {
            let new = fill(r.node(), &slots);
            out.add_term(ShuffleMonomial::from_valid(m.node().replaced(&at.position, new)), c.clone());
        }
        out
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// Parses one equation `A = B`; a line without `=` means `A = 0`.
pub fn parse_equation(text: &str) -> Result<RewriteRule, ShuffleError> {
    let mut p = Parser::new(text);
    let a = parse_element(&mut p)?;
    p.skip_ws();
    let b = if p.peek() == Some('=') {
        p.pos += 1;
        parse_element(&mut p)?
    } else {
        ShuffleElement::zero()
    };
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    RewriteRule::from_equation(&a, &b)
}

/// A rule file: one equation per line, `#` comments, blank lines ignored.
pub fn parse_rules(text: &str) -> Result<Vec<RewriteRule>, ShuffleError> {
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let rule = parse_equation(line).map_err(|e| ShuffleError::RuleFile { line: i + 1, source: Box::new(e) })?;
        rules.push(rule);
    }
    Ok(rules)
}

/// How to pick among several divisors of a monomial.
pub enum Strategy<'a> {
    /// First vertex in preorder, rules tried in order.
    LeftmostOutermost,
    /// Uniformly among all (rule, occurrence) pairs.
    Random(&'a mut dyn RngCore),
}

/// Whether no rule's left-hand side divides `m`.
pub fn is_normal(m: &ShuffleMonomial, rules: &[RewriteRule]) -> bool {
    m.node().vertex_paths().iter().all(|p| {
        let v = m.node().at(p);
        rules.iter().all(|r| !occurs_at(&r.lhs, v))
    })
}

fn choose_divisor(m: &ShuffleMonomial, rules: &[RewriteRule], strategy: &mut Strategy<'_>) -> Option<(usize, Embedding)> {
    match strategy {
        Strategy::LeftmostOutermost => m.node().vertex_paths().into_iter().find_map(|p| {
            let v = m.node().at(&p);
            rules
                .iter()
                .position(|r| r.lhs.arity() <= m.arity() && occurs_at(&r.lhs, v))
                .map(|i| (i, Embedding { position: p.clone() }))
        }),
        Strategy::Random(rng) => {
            let all: Vec<(usize, Embedding)> = rules
                .iter()
                .enumerate()
                .flat_map(|(i, r)| find_all_divisors(m, &r.lhs).into_iter().map(move |e| (i, e)))
                .collect();
            if all.is_empty() {
                None
            } else {
                let k = (rng.next_u64() % all.len() as u64) as usize;
                all.into_iter().nth(k)
            }
        }
    }
}

/// Reduces `e` until no monomial is divisible by a left-hand side. The
/// largest remaining monomial is processed first, so every rewrite only
/// introduces smaller monomials and the loop terminates.
pub fn normal_form(e: &ShuffleElement, rules: &[RewriteRule], mut strategy: Strategy<'_>) -> ShuffleElement {
    let mut work = e.clone();
    let mut done = ShuffleElement::zero();
    while let Some((m, c)) = work.pop_leading() {
        match choose_divisor(&m, rules, &mut strategy) {
            None => done.add_term(m, c),
            Some((i, at)) => {
                let step = rules[i].apply(&m, &at);
                debug_assert!(step.monomials().all(|t| *t < m), "rewrite of {m} by {} does not decrease", rules[i]);
                work.add_scaled(&step, &c);
            }
        }
    }
    done
}

/// Normal form of a single monomial with the default strategy.
pub fn reduce_monomial(m: &ShuffleMonomial, rules: &[RewriteRule]) -> ShuffleElement {
    normal_form(&ShuffleElement::monomial(m.clone()), rules, Strategy::LeftmostOutermost)
}
