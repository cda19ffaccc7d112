//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use jetsegre::strat::{Bundle, CoverPiece, CoverPlan, Edge, Insertion, Node, StratTree};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bundles(labels: &[(&str, u64)]) -> Vec<Bundle> {
    labels.iter().map(|(l, d)| Bundle { label: (*l).into(), denominator: *d }).collect()
}

pub fn edge(m: &[i64], child: Node) -> Edge {
    Edge { markings: m.iter().map(|&x| BigInt::from(x)).collect(), child }
}

/// Uniform-depth subtree with 1..=`max_children` children per node, markings
/// in `-bound..=bound` and leaf degrees in 1..=3.
pub fn random_node<R: Rng>(rng: &mut R, depth: usize, nlabels: usize, max_children: usize, bound: i64) -> Node {
    if depth == 0 {
        return Node::Leaf(rng.random_range(1..=3));
    }
    let c = rng.random_range(1..=max_children);
    Node::Internal(
        (0..c)
            .map(|_| {
                let m: Vec<i64> = (0..nlabels).map(|_| rng.random_range(-bound..=bound)).collect();
                edge(&m, random_node(rng, depth - 1, nlabels, max_children, bound))
            })
            .collect(),
    )
}

pub fn random_tree<R: Rng>(rng: &mut R, n: usize, labels: &[(&str, u64)], max_children: usize, bound: i64) -> StratTree {
    StratTree::new(n, bundles(labels), random_node(rng, n, labels.len(), max_children, bound)).unwrap()
}

/// Random tree with at most `max_edges` edges.
pub fn small_tree<R: Rng>(rng: &mut R, labels: &[(&str, u64)], max_edges: usize) -> StratTree {
    loop {
        let n = rng.random_range(1..=3);
        let t = random_tree(rng, n, labels, 3, 4);
        if t.edge_count() <= max_edges {
            return t;
        }
    }
}

fn internal_paths(node: &Node, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if let Node::Internal(edges) = node {
        out.push(prefix.clone());
        for (i, e) in edges.iter().enumerate() {
            prefix.push(i);
            internal_paths(&e.child, prefix, out);
            prefix.pop();
        }
    }
}

/// One to three zero-marked insertions at random internal nodes.
pub fn random_insertions<R: Rng>(rng: &mut R, tree: &StratTree) -> Vec<Insertion> {
    let mut parents = Vec::new();
    internal_paths(tree.root(), &mut Vec::new(), &mut parents);
    let nl = tree.bundles().len();
    (0..rng.random_range(1..=3))
        .map(|_| {
            let parent = parents[rng.random_range(0..parents.len())].clone();
            let depth = tree.dimension() - parent.len() - 1;
            Insertion { parent, subtree: random_node(rng, depth, nl, 2, 3) }
        })
        .collect()
}

/// A random valid cover plan for `label` of degree `delta` over the root:
/// each stratum of degree `e` splits into components whose degrees sum to
/// `e`, with numerators redistributed without changing sign.
pub fn random_cover_plan<R: Rng>(rng: &mut R, tree: &StratTree, label: &str, delta: u64) -> CoverPlan {
    let li = tree.label_index(label).unwrap();
    fn go<R: Rng>(rng: &mut R, node: &Node, li: usize, parent: u64) -> CoverPlan {
        CoverPlan {
            children: node
                .children()
                .iter()
                .map(|e| {
                    let m = e.markings[li].clone();
                    let mut degrees = Vec::new();
                    let mut left = parent;
                    while left > 0 {
                        let d = rng.random_range(1..=left);
                        degrees.push(d);
                        left -= d;
                    }
                    let mut nums: Vec<BigInt> = degrees.iter().map(|_| m.clone()).collect();
                    // move weight between the first two components, keeping signs
                    if degrees.len() >= 2 && m != BigInt::from(0) {
                        let (e0, e1) = (BigInt::from(degrees[0]), BigInt::from(degrees[1]));
                        let x = BigInt::from(rng.random_range(0..=2i64)) * if m > BigInt::from(0) { 1i64 } else { -1i64 };
                        let n0 = &nums[0] + &e1 * &x;
                        let n1 = &nums[1] - &e0 * &x;
                        if n1.sign() == m.sign() || n1 == BigInt::from(0) {
                            nums[0] = n0;
                            nums[1] = n1;
                        }
                    }
                    degrees
                        .iter()
                        .zip(nums)
                        .map(|(&d, numerator)| CoverPiece { degree: d, numerator, below: go(rng, &e.child, li, d) })
                        .collect()
                })
                .collect(),
        }
    }
    go(rng, tree.root(), li, delta)
}
