//! Shuffle operads presented by generators and relations.
//!
//! * [`monomial`]: shuffle trees, their text syntax, enumeration and the
//!   monomial order.
//! * [`element`]: rational linear combinations of monomials.
//! * [`rewrite`]: occurrences of patterns, oriented rules and normal forms.
//! * [`confluence`]: overlaps, confluence reports and normal-monomial
//!   counts.

pub mod confluence;
pub mod element;
pub mod monomial;
pub mod rewrite;

pub use confluence::{
    check_confluence, count_normal_monomials, normal_monomials, overlaps, ConfluenceReport, Overlap, OverlapResult,
};
pub use element::ShuffleElement;
pub use monomial::{compare, enumerate_shuffle_trees, parse_monomial, Node, ShuffleMonomial, Symbol};
pub use rewrite::{
    find_all_divisors, find_divisor, is_normal, normal_form, occurs_at, parse_equation, parse_rules, reduce_monomial,
    substitute, Embedding, RewriteRule, Strategy,
};

/// The alphabet `{x, y}` of two binary generators.
pub fn binary_alphabet(names: &[&str]) -> Vec<(Symbol, usize)> {
    names.iter().map(|n| (Symbol::new(n), 2)).collect()
}

/// Rule files shipped with the crate.
pub mod bundled {
    /// The Jacobi identity on `{x}`.
    pub const LIE: &str = include_str!("../../rules/lie.rules");
    /// The Lie-admissible identity on `{x, y}`.
    pub const LIE_ADM: &str = include_str!("../../rules/lie-adm.rules");

    /// Looks up a bundled file by name, with or without the `.rules`
    /// extension.
    pub fn get(name: &str) -> Option<&'static str> {
        match name.strip_suffix(".rules").unwrap_or(name) {
            "lie" => Some(LIE),
            "lie-adm" => Some(LIE_ADM),
            _ => None,
        }
    }
}
