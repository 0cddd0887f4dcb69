#![allow(dead_code)]

use freeprod::shuffle::{Node, ShuffleMonomial, Symbol};
use freeprod::trees::{Color, PlanarTree};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_node(rng: &mut ChaCha8Rng, labels: &[u32], symbols: &[Symbol]) -> Node {
    if labels.len() == 1 {
        return Node::Leaf(labels[0]);
    }
    let (first, rest) = labels.split_first().unwrap();
    let mut left = vec![*first];
    let mut right = Vec::new();
    let keep: usize = rng.gen_range(0..rest.len());
    let mut idx: Vec<usize> = (0..rest.len()).collect();
    idx.shuffle(rng);
    let chosen: Vec<usize> = idx[..keep].to_vec();
    for (i, &l) in rest.iter().enumerate() {
        if chosen.contains(&i) {
            left.push(l);
        } else {
            right.push(l);
        }
    }
    let sym = symbols.choose(rng).unwrap();
    Node::op(sym, vec![random_node(rng, &left, symbols), random_node(rng, &right, symbols)])
}

pub fn random_monomial(rng: &mut ChaCha8Rng, n: usize) -> ShuffleMonomial {
    let symbols = [Symbol::new("x"), Symbol::new("y")];
    let labels: Vec<u32> = (1..=n as u32).collect();
    ShuffleMonomial::new(random_node(rng, &labels, &symbols)).unwrap()
}

/// A random connected piece of `m` rooted at `root`, returned as a pattern
/// whose leaf labels rank the minimal leaves of the cut-off subtrees.
pub fn random_pattern(rng: &mut ChaCha8Rng, m: &ShuffleMonomial, root: &[usize]) -> ShuffleMonomial {
    fn cut(rng: &mut ChaCha8Rng, n: &Node, top: bool, slots: &mut Vec<u32>) -> Node {
        match n {
            Node::Op { sym, children } if top || rng.gen_bool(0.5) => {
                Node::op(sym, children.iter().map(|c| cut(rng, c, false, slots)).collect())
            }
            other => {
                slots.push(other.min_leaf());
                Node::Leaf(slots.len() as u32)
            }
        }
    }
    let mut slot_mins = Vec::new();
    let shape = cut(rng, m.node().at(root), true, &mut slot_mins);
    let mut sorted = slot_mins.clone();
    sorted.sort_unstable();
    let mut map = vec![0u32; slot_mins.len() + 1];
    for (i, v) in slot_mins.iter().enumerate() {
        map[i + 1] = sorted.iter().position(|s| s == v).unwrap() as u32 + 1;
    }
    ShuffleMonomial::new(shape.relabeled(&map)).expect("an induced pattern is a shuffle tree")
}

pub fn shuffle_condition_holds(n: &Node) -> bool {
    match n {
        Node::Leaf(_) => true,
        Node::Op { children, .. } => {
            let mins: Vec<u32> = children.iter().map(|c| *c.leaves().iter().min().unwrap()).collect();
            mins.windows(2).all(|w| w[0] < w[1]) && children.iter().all(shuffle_condition_holds)
        }
    }
}

pub fn random_planar(rng: &mut ChaCha8Rng, n: usize, parent: Option<Color>) -> PlanarTree {
    fn build(rng: &mut ChaCha8Rng, next: &mut u32, size: usize, parent: Option<Color>) -> PlanarTree {
        if size == 1 {
            *next += 1;
            return PlanarTree::Leaf(*next);
        }
        let color = match parent {
            Some(c) => c.other(),
            None if rng.gen_bool(0.5) => Color::Bullet,
            None => Color::Circ,
        };
        let k = rng.gen_range(2..=size);
        let mut sizes = vec![1usize; k];
        for _ in 0..size - k {
            let i = rng.gen_range(0..k);
            sizes[i] += 1;
        }
        let children = sizes.into_iter().map(|s| build(rng, next, s, Some(color))).collect();
        PlanarTree::Vertex { color, children }
    }
    let mut next = 0;
    let t = build(rng, &mut next, n, parent);
    let mut labels: Vec<u32> = (1..=n as u32).collect();
    labels.shuffle(rng);
    relabel(&t, &labels)
}

pub fn relabel(t: &PlanarTree, labels: &[u32]) -> PlanarTree {
    match t {
        PlanarTree::Leaf(l) => PlanarTree::Leaf(labels[*l as usize - 1]),
        PlanarTree::Vertex { color, children } => PlanarTree::Vertex {
            color: *color,
            children: children.iter().map(|c| relabel(c, labels)).collect(),
        },
    }
}
