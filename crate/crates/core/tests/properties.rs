use std::cmp::Ordering;

mod common;

use common::{random_monomial, random_pattern, random_planar, shuffle_condition_holds};
use freeprod::shuffle::{bundled, find_all_divisors, parse_rules, substitute, Embedding, ShuffleMonomial};
use freeprod::trees::PlanarTree;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn order_is_compatible_with_substitution(seed in any::<u64>(), n in 3usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monomial(&mut rng, n);
        let vertices = m.node().vertex_paths();
        let root = vertices.choose(&mut rng).unwrap().clone();
        let p = random_pattern(&mut rng, &m, &root);
        let q = random_monomial(&mut rng, p.arity());
        let at = Embedding { position: root };
        let m2 = substitute(&m, &at, &p, &q).expect("the pattern occurs where it was cut");
        prop_assert_eq!(p.cmp(&q), m.cmp(&m2), "{} / {} in {} gives {}", p, q, m, m2);
    }

    #[test]
    fn order_is_a_total_order(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_monomial(&mut rng, n);
        let b = random_monomial(&mut rng, n);
        let c = random_monomial(&mut rng, n);
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn rewriting_strictly_decreases(seed in any::<u64>(), n in 3usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rules = parse_rules(bundled::LIE_ADM).unwrap();
        let m = random_monomial(&mut rng, n);
        for at in find_all_divisors(&m, rules[0].lhs()) {
            let step = rules[0].apply(&m, &at);
            for t in step.monomials() {
                prop_assert!(*t < m);
            }
        }
    }

    #[test]
    fn parser_enforces_shuffle_condition(seed in any::<u64>(), n in 2usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_monomial(&mut rng, n);
        let mut perm: Vec<u32> = (0..=n as u32).collect();
        perm[1..].shuffle(&mut rng);
        let relabeled = m.node().relabeled(&perm);
        let text = relabeled.to_string();
        let parsed = text.parse::<ShuffleMonomial>();
        prop_assert_eq!(parsed.is_ok(), shuffle_condition_holds(&relabeled), "{}", text);
        if let Ok(p) = parsed {
            prop_assert_eq!(p.to_string(), text);
        }
    }
}

#[test]
fn as_as_grafting_is_associative_and_unital() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let id = PlanarTree::Leaf(1);
    for _ in 0..250 {
        let n = rng.gen_range(1..=4);
        let t = random_planar(&mut rng, n, None);
        let args: Vec<PlanarTree> = (0..n).map(|_| {
            let k = rng.gen_range(1..=3);
            random_planar(&mut rng, k, None)
        }).collect();
        let inner: Vec<Vec<PlanarTree>> = args
            .iter()
            .map(|a| (0..a.arity()).map(|_| {
                let k = rng.gen_range(1..=3);
                random_planar(&mut rng, k, None)
            }).collect())
            .collect();

        // γ(γ(t; a); b) = γ(t; γ(a₁; b₁), …, γ(aₙ; bₙ))
        let flat: Vec<PlanarTree> = inner.iter().flatten().cloned().collect();
        let left = t.graft(&args).unwrap().graft(&flat).unwrap();
        let grouped: Vec<PlanarTree> = args.iter().zip(&inner).map(|(a, b)| a.graft(b).unwrap()).collect();
        let right = t.graft(&grouped).unwrap();
        assert_eq!(left, right);
        assert!(left.is_alternating());

        assert_eq!(t.graft(&vec![id.clone(); n]).unwrap(), t);
        assert_eq!(id.graft(std::slice::from_ref(&t)).unwrap(), t);
    }
}
