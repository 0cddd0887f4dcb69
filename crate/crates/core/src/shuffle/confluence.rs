//! Overlaps of left-hand sides, confluence checks and counts of normal
//! monomials.
//!
//! An overlap of two rules is a monomial `m` together with an occurrence
//! of each left-hand side such that the two occurrences share at least one
//! vertex and jointly cover every internal vertex of `m`. For a rule with
//! itself only unordered pairs of distinct occurrences count. The
//! S-element of an overlap is the difference of the two one-step
//! rewrites of `m`; the rule set is confluent up to a given arity when all
//! these reduce to zero.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use rayon::prelude::*;

use super::element::ShuffleElement;
use super::monomial::{build_level, trees_on, Node, ShuffleMonomial, Symbol};
use super::rewrite::{find_all_divisors, normal_form, occurs_at, Embedding, RewriteRule, Strategy};
use crate::error::ShuffleError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub monomial: ShuffleMonomial,
    /// Indices of the two rules in the list they came from.
    pub rules: (usize, usize),
    pub embeddings: (Embedding, Embedding),
    pub s_element: ShuffleElement,
}

fn binary_alphabet(rules: &[&RewriteRule]) -> Result<Vec<(Symbol, usize)>, ShuffleError> {
    let mut symbols = BTreeMap::new();
    for r in rules {
        for (s, k) in r.lhs().symbols() {
            if k != 2 {
                return Err(ShuffleError::NonBinary(s.to_string()));
            }
            symbols.insert(s, k);
        }
    }
    Ok(symbols.into_iter().collect())
}

fn overlaps_indexed(
    (i, r1): (usize, &RewriteRule),
    (j, r2): (usize, &RewriteRule),
    max_arity: usize,
) -> Result<Vec<Overlap>, ShuffleError> {
    let alphabet = binary_alphabet(&[r1, r2])?;
    let (a1, a2) = (r1.lhs().arity(), r2.lhs().arity());
    let top = max_arity.min((a1 + a2).saturating_sub(2));
    let same = std::ptr::eq(r1, r2) || i == j;
    let mut out = Vec::new();
    for k in a1.max(a2)..=top {
        for node in trees_on(&alphabet, k) {
            let m = ShuffleMonomial::from_valid(node);
            let all: BTreeSet<Vec<usize>> = m.node().vertex_paths().into_iter().collect();
            let e1s = find_all_divisors(&m, r1.lhs());
            let e2s = find_all_divisors(&m, r2.lhs());
            for (p, e1) in e1s.iter().enumerate() {
                for (q, e2) in e2s.iter().enumerate() {
                    if same && q <= p {
                        continue;
                    }
                    let v1: BTreeSet<Vec<usize>> = e1.vertices(r1.lhs()).into_iter().collect();
                    let v2: BTreeSet<Vec<usize>> = e2.vertices(r2.lhs()).into_iter().collect();
                    if v1.is_disjoint(&v2) || v1.union(&v2).count() != all.len() {
                        continue;
                    }
                    let s_element = r1.apply(&m, e1).sub(&r2.apply(&m, e2));
                    out.push(Overlap {
                        monomial: m.clone(),
                        rules: (i, j),
                        embeddings: (e1.clone(), e2.clone()),
                        s_element,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// All overlaps of `r1` with `r2` up to `max_arity`, ascending by monomial.
pub fn overlaps(r1: &RewriteRule, r2: &RewriteRule, max_arity: usize) -> Result<Vec<Overlap>, ShuffleError> {
    let same = r1 == r2;
    let mut out = overlaps_indexed((0, r1), (usize::from(!same), r2), max_arity)?;
    out.sort_by(|a, b| a.monomial.cmp(&b.monomial).then_with(|| a.embeddings.cmp(&b.embeddings)));
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct OverlapResult {
    pub overlap: Overlap,
    /// Normal form of the S-element.
    pub residue: ShuffleElement,
}

#[derive(Debug, Clone)]
pub struct ConfluenceReport {
    pub max_arity: usize,
    pub results: Vec<OverlapResult>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.residue.is_zero())
    }

    /// Overlaps whose S-element does not reduce to zero.
    pub fn failures(&self) -> impl Iterator<Item = &OverlapResult> {
        self.results.iter().filter(|r| !r.residue.is_zero())
    }

    /// Distinct overlap monomials, ascending.
    pub fn overlap_monomials(&self) -> Vec<&ShuffleMonomial> {
        let mut v: Vec<&ShuffleMonomial> = self.results.iter().map(|r| &r.overlap.monomial).collect();
        v.dedup();
        v
    }
}

/// Reduces the S-element of every overlap among `rules` (each rule with
/// itself and every pair) up to `max_arity`. Results are sorted by overlap
/// monomial, then by rule pair and occurrences.
pub fn check_confluence(rules: &[RewriteRule], max_arity: usize) -> Result<ConfluenceReport, ShuffleError> {
    let mut all = Vec::new();
    for i in 0..rules.len() {
        for j in i..rules.len() {
            all.extend(overlaps_indexed((i, &rules[i]), (j, &rules[j]), max_arity)?);
        }
    }
    all.sort_by(|a, b| {
        a.monomial
            .cmp(&b.monomial)
            .then_with(|| a.rules.cmp(&b.rules))
            .then_with(|| a.embeddings.cmp(&b.embeddings))
    });
    let results = all
        .into_par_iter()
        .map(|overlap| {
            let residue = normal_form(&overlap.s_element, rules, Strategy::LeftmostOutermost);
            OverlapResult { overlap, residue }
        })
        .collect();
    Ok(ConfluenceReport { max_arity, results })
}

/// Number of shuffle monomials of arity `n` over `alphabet` divisible by no
/// left-hand side. Normal trees are built bottom-up: children of a normal
/// tree are normal, so only occurrences at the root need checking.
pub fn count_normal_monomials(alphabet: &[(Symbol, usize)], rules: &[RewriteRule], n: usize) -> BigUint {
    if n == 0 {
        return BigUint::default();
    }
    let lhs: Vec<&ShuffleMonomial> = rules.iter().map(RewriteRule::lhs).collect();
    let normal_root = |t: &Node| lhs.iter().all(|l| !occurs_at(l, t));
    let mut memo: Vec<Vec<Node>> = vec![Vec::new(), vec![Node::Leaf(1)]];
    for k in 2..n {
        let level = build_level(alphabet, k, &memo, normal_root);
        memo.push(level);
    }
    if n == 1 {
        return BigUint::from(1u32);
    }
    let mut count: u64 = 0;
    build_level(alphabet, n, &memo, |t| {
        if normal_root(t) {
            count += 1;
        }
        false
    });
    BigUint::from(count)
}

/// The normal monomials themselves, ascending.
pub fn normal_monomials(alphabet: &[(Symbol, usize)], rules: &[RewriteRule], n: usize) -> Vec<ShuffleMonomial> {
    if n == 0 {
        return Vec::new();
    }
    let lhs: Vec<&ShuffleMonomial> = rules.iter().map(RewriteRule::lhs).collect();
    let normal_root = |t: &Node| lhs.iter().all(|l| !occurs_at(l, t));
    let mut memo: Vec<Vec<Node>> = vec![Vec::new(), vec![Node::Leaf(1)]];
    for k in 2..=n {
        let level = build_level(alphabet, k, &memo, normal_root);
        memo.push(level);
    }
    let mut out: Vec<ShuffleMonomial> = memo.swap_remove(n).into_iter().map(ShuffleMonomial::from_valid).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::factorial;
    use crate::shuffle::{enumerate_shuffle_trees, is_normal, parse_rules};

    fn jacobi() -> Vec<RewriteRule> {
        parse_rules("x(x(1 2) 3) = x(1 x(2 3)) + x(x(1 3) 2)").unwrap()
    }

    fn x_only() -> Vec<(Symbol, usize)> {
        vec![(Symbol::new("x"), 2)]
    }

    #[test]
    fn jacobi_has_one_overlap() {
        let r = &jacobi()[0];
        let ov = overlaps(r, r, 4).unwrap();
        assert_eq!(ov.len(), 1);
        assert_eq!(ov[0].monomial.to_string(), "x(x(x(1 2) 3) 4)");
        assert_eq!(overlaps(r, r, 7).unwrap().len(), 1);
        assert!(overlaps(r, r, 3).unwrap().is_empty());
    }

    #[test]
    fn jacobi_is_confluent() {
        let report = check_confluence(&jacobi(), 5).unwrap();
        assert!(report.passed());
        assert_eq!(report.overlap_monomials().len(), 1);
    }

    #[test]
    fn corrupted_jacobi_fails() {
        let rules = parse_rules("x(x(1 2) 3) = x(1 x(2 3)) + 2*x(x(1 3) 2)").unwrap();
        let report = check_confluence(&rules, 5).unwrap();
        assert!(!report.passed());
        assert!(report.failures().all(|f| !f.residue.is_zero()));
    }

    #[test]
    fn disjoint_symbols_do_not_overlap() {
        let rules = parse_rules("x(x(1 2) 3) = x(1 x(2 3))\ny(y(1 2) 3) = y(1 y(2 3))").unwrap();
        assert!(overlaps(&rules[0], &rules[1], 5).unwrap().is_empty());
        let report = check_confluence(&rules, 5).unwrap();
        assert!(report.passed());
        assert_eq!(report.overlap_monomials().len(), 2);
    }

    #[test]
    fn non_binary_rules_are_rejected() {
        let rules = parse_rules("t(t(1 2 3) 4 5) = t(1 t(2 3 4) 5)").unwrap();
        assert!(matches!(check_confluence(&rules, 5), Err(ShuffleError::NonBinary(_))));
    }

    #[test]
    fn lie_counts() {
        let rules = jacobi();
        for n in 1..=6 {
            assert_eq!(count_normal_monomials(&x_only(), &rules, n), factorial(n - 1));
        }
    }

    #[test]
    fn counting_matches_filtering() {
        let rules = parse_rules("x(x(1 2) 3) = x(1 x(2 3))\nx(1 y(2 3)) = y(1 x(2 3))").unwrap();
        let xy = vec![(Symbol::new("x"), 2), (Symbol::new("y"), 2)];
        for n in 1..=5 {
            let filtered: Vec<ShuffleMonomial> =
                enumerate_shuffle_trees(&xy, n).into_iter().filter(|m| is_normal(m, &rules)).collect();
            assert_eq!(count_normal_monomials(&xy, &rules, n), BigUint::from(filtered.len()));
            assert_eq!(normal_monomials(&xy, &rules, n), filtered);
        }
    }
}
