use std::sync::Arc;

use jetsegre::arith::factorial_int;
use jetsegre::lattice::{count_cone_points, enumerate_compositions, power_sum, power_sum_asymptotic, weighted_power_poly_sum};
use jetsegre::ring::{GradedPoly, Ring};
use jetsegre::simplex::SimplexSpec;
use jetsegre::Rational;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

/// Weight vectors and level multiples for which the generated basis cells
/// tile the dilated simplex.
const TILING: [(&[u64], u64); 6] = [(&[1, 1], 1), (&[1, 1, 1], 1), (&[2, 2, 1], 1), (&[1, 1, 1, 1], 1), (&[1, 2], 2), (&[2, 3], 6)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cells_partition_the_level_sets(case in 0usize..TILING.len(), k in 1u64..=4, extra in 0u64..=12) {
        let (a, step) = TILING[case];
        let s = SimplexSpec::new(a.to_vec()).unwrap();
        let m0 = step * k;
        let m = m0 + s.gcd() * extra;
        let total: u64 = enumerate_compositions(&s, m0).map(|u| count_cone_points(&s, m0, &u, m).unwrap()).sum();
        prop_assert_eq!(total, enumerate_compositions(&s, m).count() as u64);
    }

    #[test]
    fn power_sums_approach_their_leading_term(a in prop::collection::vec(1u64..=3, 1..=3), p in prop::collection::vec(0u32..=2, 3)) {
        let s = SimplexSpec::new(a.clone()).unwrap();
        let p = &p[..a.len()];
        let e = p.iter().sum::<u32>() as u64 + a.len() as u64 - 1;
        let lead = power_sum_asymptotic(&s, p).unwrap();
        let base = 12 * s.gcd();
        let errs: Vec<Rational> = [base, 2 * base, 4 * base]
            .iter()
            .map(|&m| {
                let scaled = power_sum(&s, p, m).unwrap() * Rational::from_integer(factorial_int(e))
                    / Rational::from_integer(num_traits::pow(BigInt::from(m), e as usize));
                ((scaled - &lead) / &lead).abs()
            })
            .collect();
        prop_assert!(errs[1] <= errs[0] && errs[2] <= errs[1], "{:?}", errs);
    }

    #[test]
    fn power_poly_sum_matches_expansion(a in prop::collection::vec(1u64..=3, 1..=3), n in 0u32..=3, m in 0u64..=12) {
        let s = SimplexSpec::new(a.clone()).unwrap();
        let r = a.len();
        let ring: Arc<Ring> = Ring::chern_roots(n, "x", r);
        let got = weighted_power_poly_sum(&ring, &s, n, m).unwrap();
        let vars: Vec<GradedPoly> = (1..=r).map(|i| GradedPoly::var(&ring, &format!("x{i}")).unwrap()).collect();
        let mut expected = GradedPoly::zero(&ring);
        for l in enumerate_compositions(&s, m) {
            let mut lin = GradedPoly::zero(&ring);
            for (x, &li) in vars.iter().zip(&l) {
                lin = lin.add(&x.scale(&Rational::from_integer(BigInt::from(li)))).unwrap();
            }
            expected = expected.add(&lin.pow(n).unwrap()).unwrap();
        }
        let expected = expected.scale(&Rational::new(BigInt::from(1), factorial_int(n as u64)));
        prop_assert_eq!(got, expected);
    }
}
