use jetsegre::arith::rat;
use jetsegre::lattice::multi_indices;
use jetsegre::simplex::{affine_product_expectation, cell_ratio, fundamental_domain_volume, monomial_moment, volume, AffineForm, SimplexSpec};
use jetsegre::Rational;
use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

fn weights(max_r: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=6, 1..=max_r)
}

proptest! {
    #[test]
    fn normalization(a in weights(5)) {
        let s = SimplexSpec::new(a.clone()).unwrap();
        prop_assert_eq!(monomial_moment(&s, &vec![0; a.len()]).unwrap(), Rational::one());
    }

    #[test]
    fn volume_ratio_is_cell_ratio(a in weights(4).prop_filter("r ≥ 2", |a| a.len() >= 2)) {
        let s = SimplexSpec::new(a).unwrap();
        let ratio = volume(&s).ratio(&fundamental_domain_volume(&s).unwrap());
        prop_assert_eq!(ratio, Some(cell_ratio(&s).unwrap()));
    }

    #[test]
    fn scaling_law(a in weights(4), total in 0u32..=5, pick in any::<prop::sample::Index>()) {
        let r = a.len();
        let ps = multi_indices(r, total);
        let p = &ps[pick.index(ps.len())];
        let s = SimplexSpec::new(a.clone()).unwrap();
        let scale = a.iter().zip(p).fold(BigInt::one(), |acc, (&w, &e)| acc * num_traits::pow(BigInt::from(w), e as usize));
        let standard = monomial_moment(&SimplexSpec::standard(r), p).unwrap();
        prop_assert_eq!(monomial_moment(&s, p).unwrap(), standard / Rational::from_integer(scale));
    }

    #[test]
    fn single_form_is_vertex_average(a in weights(5), c in -5i64..=5, coeffs in prop::collection::vec((-7i64..=7, 1i64..=3), 5)) {
        let s = SimplexSpec::new(a.clone()).unwrap();
        let r = a.len();
        let form = AffineForm::new(rat(c, 2), coeffs[..r].iter().map(|&(n, d)| rat(n, d)).collect());
        let avg: Rational = (0..r).map(|i| form.eval(&s.vertex(i))).sum::<Rational>() / Rational::from_integer(BigInt::from(r));
        prop_assert_eq!(affine_product_expectation(&s, &[form]).unwrap(), avg);
    }
}
