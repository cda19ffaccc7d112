use jetsegre::arith::{factorial_int, pow_rational, to_f64};
use jetsegre::ring::Ring;
use jetsegre::segre::{chi_leading_asymptotic, chi_leading_exact, gg_surface_class, gg_surface_class_closed, WeightedSplitBundle};
use jetsegre::simplex::SimplexSpec;
use jetsegre::Rational;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_chi_converges(a in prop::collection::vec(1u64..=3, 1..=3), n in 1u32..=3) {
        let r = a.len();
        let ring = Ring::chern_roots(n, "x", r);
        let b = WeightedSplitBundle::line_bundles(&ring, &a).unwrap();
        let asym = chi_leading_asymptotic(&b, n).unwrap();
        let e = n + r as u32 - 1;
        let base = 10 * SimplexSpec::new(a).unwrap().gcd();
        let gaps: Vec<f64> = [base, 2 * base, 4 * base]
            .iter()
            .map(|&m| {
                let scale = Rational::from_integer(factorial_int(e as u64)) / pow_rational(&Rational::from_integer(BigInt::from(m)), e);
                let exact = chi_leading_exact(&b, n, m).unwrap();
                asym.terms().map(|(x, c)| to_f64(&(exact.coeff(x) * &scale - c).abs())).fold(0.0, f64::max)
            })
            .collect();
        prop_assert!(gaps[1] <= gaps[0] && gaps[2] <= gaps[1], "{:?}", gaps);
    }
}

#[test]
fn surface_classes_agree_up_to_twelve() {
    for k in 1..=12 {
        assert_eq!(gg_surface_class(k).unwrap(), gg_surface_class_closed(k).unwrap(), "k={k}");
    }
    assert_eq!(gg_surface_class(1).unwrap().to_string(), "c1^2 - c2");
}
