use jetsegre::arith::rat;
use jetsegre::mc::{
    dirichlet_density_check, estimate, estimate_many, jets_decomposition, negative_correlation_check, sample_simplex, MCConfig, Z_THRESHOLD,
};
use jetsegre::simplex::SimplexSpec;
use jetsegre::Rational;
use num_traits::One;

#[test]
fn identical_configs_give_identical_results() {
    let a = SimplexSpec::new(vec![1, 2, 2]).unwrap();
    let f = |t: &[f64]| t[0] * t[1] - t[2];
    let runs: Vec<_> = [1, 2, 3, 8].iter().map(|&w| estimate(&a, &MCConfig::new(42, 30_000, w), f).unwrap()).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    assert_eq!(estimate(&a, &MCConfig::new(42, 30_000, 2), f).unwrap(), runs[0]);
}

#[test]
fn uniform_means() {
    let a = SimplexSpec::standard(4);
    let est = estimate_many(&a, &MCConfig::new(1, 1_000_000, 4), 4, |t, out| {
        out.copy_from_slice(t);
        true
    })
    .unwrap();
    for e in est {
        assert!(e.zscore(0.25).abs() <= Z_THRESHOLD, "{e:?}");
    }
    let n = sample_simplex(&a, &MCConfig::new(1, 10, 1)).count();
    assert_eq!(n, 10);
}

#[test]
fn jet_blocks_are_uncorrelated() {
    let (k, r) = (3, 2);
    let a = SimplexSpec::jets(k, r);
    // (j, l, j', l') with j ≠ j'
    let pairs = [(0, 0, 1, 0), (0, 1, 2, 0), (1, 0, 2, 1), (0, 0, 2, 1)];
    let mean = 1.0 / r as f64;
    let est = estimate_many(&a, &MCConfig::new(3, 1_000_000, 4), pairs.len(), |t, out| {
        let Some(s) = jets_decomposition(t, k, r) else { return false };
        for (o, &(j, l, j2, l2)) in out.iter_mut().zip(&pairs) {
            *o = (s.z[j][l] - mean) * (s.z[j2][l2] - mean);
        }
        true
    })
    .unwrap();
    for e in est {
        assert!(e.zscore(0.0).abs() <= Z_THRESHOLD, "{e:?}");
    }
}

#[test]
fn dirichlet_density_matches_jets() {
    for (k, r) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
        let rep = dirichlet_density_check(k, r, &MCConfig::new(11, 1_000_000, 4)).unwrap();
        assert_eq!(rep.normalization, Rational::one());
        assert!(rep.passes(Z_THRESHOLD), "k={k}, r={r}: {rep:?}");
    }
    let rep = dirichlet_density_check(2, 2, &MCConfig::new(11, 1000, 1)).unwrap();
    assert_eq!(rep.density_constant, rat(6, 1));
}

#[test]
fn jet_coordinates_are_negatively_correlated() {
    for k in 2..=4 {
        for r in 1..=3 {
            for row in negative_correlation_check(k, r, &MCConfig::new(13, 200_000, 4)).unwrap() {
                assert!(row.exact_holds && row.empirical_holds, "k={k}, r={r}: {row:?}");
                assert!(row.zscore.abs() <= Z_THRESHOLD, "k={k}, r={r}: {row:?}");
            }
        }
    }
}
