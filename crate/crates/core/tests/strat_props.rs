mod common;

use jetsegre::strat::{c_max, cover, index_sign, CMaxAlgorithm, Edge, Node, StratTree};
use jetsegre::Rational;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::{random_cover_plan, random_insertions, random_tree, rng};

const LABELS: [(&str, u64); 3] = [("L", 1), ("M", 2), ("N", 3)];

fn tree(seed: u64) -> StratTree {
    let mut g = rng(seed);
    let n = g.random_range(1..=4);
    random_tree(&mut g, n, &LABELS, 3, 5)
}

fn total(t: &StratTree, label: &str) -> Rational {
    (0..=t.dimension()).map(|l| t.degree_by_index(label, l).unwrap()).sum()
}

fn shuffled(node: &Node, g: &mut impl Rng) -> Node {
    match node {
        Node::Leaf(d) => Node::Leaf(*d),
        Node::Internal(edges) => {
            let mut out: Vec<Edge> = edges.iter().map(|e| Edge { markings: e.markings.clone(), child: shuffled(&e.child, g) }).collect();
            out.shuffle(g);
            Node::Internal(out)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn recursion_matches_enumeration(seed in any::<u64>()) {
        let t = tree(seed);
        for (label, _) in LABELS {
            for l in 0..=t.dimension() {
                prop_assert_eq!(t.degree_recursive(label, l).unwrap(), t.degree_truncated(label, l).unwrap());
            }
        }
    }

    #[test]
    fn totals_are_invariant(seed in any::<u64>(), f in 1u64..=4) {
        let t = tree(seed);
        let mut g = rng(seed ^ 0x55);
        let refined = t.refine(&random_insertions(&mut g, &t)).unwrap();
        let shuffled = StratTree::new(t.dimension(), t.bundles().to_vec(), shuffled(t.root(), &mut g)).unwrap();
        for (label, _) in LABELS {
            let base = total(&t, label);
            prop_assert_eq!(&total(&refined, label), &base);
            prop_assert_eq!(&total(&t.power_trivialization(label, f, false).unwrap(), label), &base);
            prop_assert_eq!(&total(&shuffled, label), &base);
            for l in 0..=t.dimension() {
                prop_assert_eq!(refined.degree_by_index(label, l).unwrap(), t.degree_by_index(label, l).unwrap());
            }
        }
    }

    #[test]
    fn covers_scale_by_degree(seed in any::<u64>(), delta in 1u64..=3, which in 0usize..3) {
        let mut g = rng(seed);
        let n = g.random_range(1..=3);
        let t = random_tree(&mut g, n, &LABELS, 2, 5);
        let label = LABELS[which].0;
        let plan = random_cover_plan(&mut g, &t, label, delta);
        let (covered, d) = cover(&t, label, &plan).unwrap();
        prop_assert_eq!(d, delta);
        for l in 0..=n {
            prop_assert_eq!(covered.degree_truncated(label, l).unwrap(), t.degree_truncated(label, l).unwrap() * BigInt::from(delta));
        }
    }

    #[test]
    fn single_label_cmax_collapses(seed in any::<u64>()) {
        let t = tree(seed);
        for (label, _) in LABELS {
            for i in 0..=t.dimension() {
                let expected = index_sign(i) * t.degree_truncated(label, i).unwrap();
                prop_assert_eq!(c_max(&t, &[label], i, CMaxAlgorithm::Dp).unwrap(), expected);
            }
        }
    }

    #[test]
    fn brute_and_dp_agree(seed in any::<u64>()) {
        let mut g = rng(seed);
        let nl = g.random_range(1..=3);
        let t = common::small_tree(&mut g, &LABELS[..nl], 8);
        let labels: Vec<&str> = LABELS[..nl].iter().map(|(l, _)| *l).collect();
        for i in 0..=t.dimension() {
            prop_assert_eq!(c_max(&t, &labels, i, CMaxAlgorithm::Brute).unwrap(), c_max(&t, &labels, i, CMaxAlgorithm::Dp).unwrap());
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let t = tree(seed);
        prop_assert_eq!(StratTree::from_json(&t.to_json().unwrap()).unwrap(), t);
    }
}
