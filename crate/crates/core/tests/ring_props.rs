use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use jetsegre::arith::rat;
use jetsegre::ring::{poly_add, poly_component, poly_mul, poly_scale_vars, GradedPoly, Ring};
use jetsegre::Rational;
use num_traits::Zero;
use proptest::prelude::*;

fn ring() -> Arc<Ring> {
    Ring::new(4, vec![("x", 1), ("y", 2), ("z", 1)]).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

type Terms = Vec<(Vec<u32>, Rational)>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0u32..=3, 3), rational()), 0..6)
}

fn poly(t: &Terms) -> GradedPoly {
    GradedPoly::from_terms(&ring(), t.clone()).unwrap()
}

/// Full product of the raw term lists, then dropped above the bound.
fn naive_product(p: &Terms, q: &Terms) -> BTreeMap<Vec<u32>, Rational> {
    let r = ring();
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (e1, c1) in p {
        if r.weighted_degree(e1) > 4 {
            continue;
        }
        for (e2, c2) in q {
            if r.weighted_degree(e2) > 4 {
                continue;
            }
            let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
            if r.weighted_degree(&e) <= 4 {
                *out.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

proptest! {
    #[test]
    fn ring_laws(a in terms(), b in terms(), c in terms()) {
        let (p, q, s) = (poly(&a), poly(&b), poly(&c));
        prop_assert_eq!(poly_add(&p, &q).unwrap(), poly_add(&q, &p).unwrap());
        prop_assert_eq!(poly_mul(&p, &q).unwrap(), poly_mul(&q, &p).unwrap());
        prop_assert_eq!(
            poly_mul(&poly_mul(&p, &q).unwrap(), &s).unwrap(),
            poly_mul(&p, &poly_mul(&q, &s).unwrap()).unwrap()
        );
        prop_assert_eq!(
            poly_mul(&p, &poly_add(&q, &s).unwrap()).unwrap(),
            poly_add(&poly_mul(&p, &q).unwrap(), &poly_mul(&p, &s).unwrap()).unwrap()
        );
    }

    #[test]
    fn truncated_product_matches_naive(a in terms(), b in terms()) {
        let prod = poly_mul(&poly(&a), &poly(&b)).unwrap();
        let got: BTreeMap<Vec<u32>, Rational> = prod.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
        prop_assert_eq!(got, naive_product(&a, &b));
        let mut sum = GradedPoly::zero(&ring());
        for d in 0..=4 {
            sum = poly_add(&sum, &poly_component(&prod, d).unwrap()).unwrap();
        }
        prop_assert_eq!(sum, prod);
    }

    #[test]
    fn scaling_is_multiplicative(a in terms(), b in terms(), f in prop::collection::vec(rational(), 3)) {
        let factors: HashMap<String, Rational> = ["x", "y", "z"].iter().map(|s| s.to_string()).zip(f).collect();
        let (p, q) = (poly(&a), poly(&b));
        let lhs = poly_scale_vars(&poly_mul(&p, &q).unwrap(), &factors).unwrap();
        let rhs = poly_mul(&poly_scale_vars(&p, &factors).unwrap(), &poly_scale_vars(&q, &factors).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
