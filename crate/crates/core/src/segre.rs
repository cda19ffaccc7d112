//! Weighted Segre classes and the leading coefficients they compute.
//!
//! The Segre series of a line bundle with Chern root `α` is taken as
//! `1 + α + α² + …`, so that the degree-`n` part of the Segre series of a
//! split bundle is the complete homogeneous polynomial in its roots. A bundle
//! placed in weight `a` has its degree-`l` part divided by `a^l` and the whole
//! series divided by `a^{rk−1}`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::{factorial_int, gcd_slice, harmonic, harmonic_squares, pow_rational, Rational};
use crate::error::{Error, Result};
use crate::lattice::{multi_indices, weighted_power_poly_sum};
use crate::ring::{GradedPoly, Ring};
use crate::simplex::SimplexSpec;

/// One summand `E^(a)` with `E` split into line bundles.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitFactor {
    pub roots: Vec<GradedPoly>,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSplitBundle {
    ring: Arc<Ring>,
    factors: Vec<SplitFactor>,
}

impl WeightedSplitBundle {
    pub fn new(ring: &Arc<Ring>, factors: Vec<SplitFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyBundle);
        }
        for f in &factors {
            if f.weight == 0 {
                return Err(Error::InvalidArgument("weights must be positive".into()));
            }
            if f.roots.is_empty() {
                return Err(Error::InvalidArgument("a summand needs at least one root".into()));
            }
            for root in &f.roots {
                if **root.ring() != **ring {
                    return Err(Error::IncompatibleRing);
                }
            }
        }
        Ok(WeightedSplitBundle { ring: ring.clone(), factors })
    }

    /// `⊕ L_i^(a_i)` where `L_i` has root the `i`-th variable of `ring`.
    pub fn line_bundles(ring: &Arc<Ring>, weights: &[u64]) -> Result<Self> {
        if weights.len() != ring.nvars() {
            return Err(Error::ArityMismatch { expected: ring.nvars(), got: weights.len() });
        }
        let factors = ring
            .vars()
            .iter()
            .zip(weights)
            .map(|((name, _), &weight)| Ok(SplitFactor { roots: vec![GradedPoly::var(ring, name)?], weight }))
            .collect::<Result<_>>()?;
        Self::new(ring, factors)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn factors(&self) -> &[SplitFactor] {
        &self.factors
    }

    /// Every summand split into its rank-one pieces, each keeping its weight.
    pub fn flatten(&self) -> Vec<(GradedPoly, u64)> {
        self.factors
            .iter()
            .flat_map(|f| f.roots.iter().map(move |r| (r.clone(), f.weight)))
            .collect()
    }

    fn weights(&self) -> Vec<u64> {
        self.flatten().iter().map(|(_, w)| *w).collect()
    }

    /// Total Segre series `Π_roots (1 + α + α² + …)` of one summand, unweighted.
    pub fn total_segre(&self, factor: usize) -> Result<GradedPoly> {
        let f = &self.factors[factor];
        let mut out = GradedPoly::one(&self.ring);
        for root in &f.roots {
            out = out.mul(&geometric_series(root)?)?;
        }
        Ok(out)
    }

    /// The weighted Whitney product of all summands.
    pub fn whitney(&self) -> Result<GradedPoly> {
        let parts = (0..self.factors.len())
            .map(|i| Ok((self.total_segre(i)?, self.factors[i].roots.len() as u32, self.factors[i].weight)))
            .collect::<Result<Vec<_>>>()?;
        whitney_weighted(&parts)
    }
}

fn geometric_series(x: &GradedPoly) -> Result<GradedPoly> {
    let ring = x.ring();
    let mut out = GradedPoly::one(ring);
    let mut pow = GradedPoly::one(ring);
    for _ in 0..ring.bound() {
        pow = pow.mul(x)?;
        if pow.is_zero() {
            break;
        }
        out = out.add(&pow)?;
    }
    Ok(out)
}

fn check_weight(a: u64) -> Result<()> {
    if a == 0 {
        Err(Error::InvalidArgument("weight must be positive".into()))
    } else {
        Ok(())
    }
}

/// `s(E^(a)) = a^{−(rank−1)} Σ_l s_l(E)/a^l`.
pub fn segre_single(s_total: &GradedPoly, rank: u32, a: u64) -> Result<GradedPoly> {
    check_weight(a)?;
    let a_q = Rational::from_integer(BigInt::from(a));
    let pre = pow_rational(&a_q, rank.saturating_sub(1)).recip();
    let mut out = GradedPoly::zero(s_total.ring());
    for l in 0..=s_total.ring().bound() {
        let part = s_total.component(l)?;
        out = out.add(&part.scale(&(&pre / pow_rational(&a_q, l))))?;
    }
    Ok(out)
}

/// `gcd(a)/Π a_j · Π_j s(E_j^(a_j))` for parts `(s(E_j), rank_j, a_j)`.
pub fn whitney_weighted(parts: &[(GradedPoly, u32, u64)]) -> Result<GradedPoly> {
    let (first, _, _) = parts.first().ok_or(Error::EmptyBundle)?;
    let weights: Vec<u64> = parts.iter().map(|p| p.2).collect();
    for &w in &weights {
        check_weight(w)?;
    }
    let prod_w = weights.iter().fold(BigInt::one(), |acc, &w| acc * w);
    let mut out = GradedPoly::constant(first.ring(), Rational::new(BigInt::from(gcd_slice(&weights)), prod_w));
    for (s, rank, a) in parts {
        out = out.mul(&segre_single(s, *rank, *a)?)?;
    }
    Ok(out)
}

/// `Σ_{a·l = m} (Σ α_i l_i)^n / n!` over the line-bundle pieces of `b`.
pub fn chi_leading_exact(b: &WeightedSplitBundle, n: u32, m: u64) -> Result<GradedPoly> {
    let ring = b.ring();
    if ring.bound() < n {
        return Err(Error::OutOfRange { degree: n, bound: ring.bound() });
    }
    let flat = b.flatten();
    let spec = SimplexSpec::new(b.weights())?;
    let aux = Ring::chern_roots(n, "x", flat.len());
    let sum = weighted_power_poly_sum(&aux, &spec, n, m)?;
    let roots: Vec<GradedPoly> = flat.into_iter().map(|(r, _)| r).collect();
    sum.substitute(ring, &roots)
}

/// Coefficient of `m^{n+r−1}/(n+r−1)!` in [`chi_leading_exact`]:
/// `gcd/Π a_i · Σ_{|p|=n} Π (α_i/a_i)^{p_i}`.
pub fn chi_leading_asymptotic(b: &WeightedSplitBundle, n: u32) -> Result<GradedPoly> {
    let ring = b.ring();
    if ring.bound() < n {
        return Err(Error::OutOfRange { degree: n, bound: ring.bound() });
    }
    let flat = b.flatten();
    let weights = b.weights();
    let scaled: Vec<GradedPoly> = flat
        .iter()
        .map(|(root, w)| root.scale(&Rational::new(BigInt::one(), BigInt::from(*w))))
        .collect();
    let mut sum = GradedPoly::zero(ring);
    for p in multi_indices(flat.len(), n) {
        let mut term = GradedPoly::one(ring);
        for (x, &e) in scaled.iter().zip(&p) {
            term = term.mul(&x.pow(e)?)?;
        }
        sum = sum.add(&term)?;
    }
    let prod_w = weights.iter().fold(BigInt::one(), |acc, &w| acc * w);
    Ok(sum.scale(&Rational::new(BigInt::from(gcd_slice(&weights)), prod_w)))
}

/// `(α_k, β_k)` with `α_k = Σ_{i≤j≤k} 1/(ij)` and `β_k = Σ_{i≤k} 1/i²`.
pub fn gg_surface_coeffs(k: u64) -> Result<(Rational, Rational)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut alpha = Rational::zero();
    for j in 1..=k {
        alpha += harmonic(j) / Rational::from_integer(BigInt::from(j));
    }
    Ok((alpha, harmonic_squares(k)))
}

/// The ring `{c1: 1, c2: 2}` truncated at degree 2.
pub fn surface_ring() -> Arc<Ring> {
    Ring::new(2, vec![("c1", 1), ("c2", 2)]).expect("fixed ring")
}

/// Degree-2 part of `Π_{i≤k} [1 − c1/i + (c1² − c2)/i²] / k!`.
pub fn gg_surface_class(k: u64) -> Result<GradedPoly> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let ring = surface_ring();
    let mut prod = GradedPoly::one(&ring);
    for i in 1..=k {
        let inv = Rational::new(BigInt::one(), BigInt::from(i));
        let inv2 = &inv * &inv;
        let factor = GradedPoly::from_terms(
            &ring,
            vec![
                (vec![0, 0], Rational::one()),
                (vec![1, 0], -inv),
                (vec![2, 0], inv2.clone()),
                (vec![0, 1], -inv2),
            ],
        )?;
        prod = prod.mul(&factor)?;
    }
    let kfact = Rational::from_integer(factorial_int(k));
    Ok(prod.component(2)?.scale(&kfact.recip()))
}

/// `(α_k c1² − β_k c2)/k!` from [`gg_surface_coeffs`].
pub fn gg_surface_class_closed(k: u64) -> Result<GradedPoly> {
    let (alpha, beta) = gg_surface_coeffs(k)?;
    let kfact = Rational::from_integer(factorial_int(k));
    let ring = surface_ring();
    GradedPoly::from_terms(&ring, vec![(vec![2, 0], alpha / &kfact), (vec![0, 1], -beta / kfact)])
}

/// Coefficient of `q^m` in `Π_{j≤k} (1 − q^j)^{−n}`.
pub fn jet_rank(n: u64, k: u64, m: u64) -> BigUint {
    let m = m as usize;
    let mut c = vec![BigUint::zero(); m + 1];
    c[0] = BigUint::one();
    for j in 1..=k as usize {
        if j > m {
            break;
        }
        for _ in 0..n {
            for t in j..=m {
                let prev = c[t - j].clone();
                c[t] += prev;
            }
        }
    }
    c.swap_remove(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn roots(bound: u32, r: usize) -> Arc<Ring> {
        Ring::chern_roots(bound, "a", r)
    }

    #[test]
    fn single_segre() {
        let ring = roots(2, 1);
        let b = WeightedSplitBundle::line_bundles(&ring, &[1]).unwrap();
        let s = b.total_segre(0).unwrap();
        assert_eq!(s.to_string(), "1 + a1 + a1^2");
        assert_eq!(segre_single(&s, 1, 1).unwrap(), s);
        assert_eq!(segre_single(&s, 1, 2).unwrap().to_string(), "1 + 1/2*a1 + 1/4*a1^2");
        assert_eq!(segre_single(&GradedPoly::one(&ring), 2, 3).unwrap().to_string(), "1/3");
    }

    #[test]
    fn whitney_examples() {
        let r1 = roots(1, 1);
        let s = GradedPoly::one(&r1).add(&GradedPoly::var(&r1, "a1").unwrap()).unwrap();
        assert_eq!(whitney_weighted(&[(s.clone(), 1, 1)]).unwrap(), s);
        assert_eq!(whitney_weighted(&[]), Err(Error::EmptyBundle));

        let r2 = roots(1, 2);
        let b = WeightedSplitBundle::line_bundles(&r2, &[1, 1]).unwrap();
        assert_eq!(b.whitney().unwrap().component(1).unwrap().to_string(), "a1 + a2");
        let b = WeightedSplitBundle::line_bundles(&r2, &[1, 2]).unwrap();
        assert_eq!(b.whitney().unwrap().to_string(), "1/2 + 1/2*a1 + 1/4*a2");
    }

    #[test]
    fn chi_examples() {
        let ring = roots(1, 2);
        let b11 = WeightedSplitBundle::line_bundles(&ring, &[1, 1]).unwrap();
        assert_eq!(chi_leading_exact(&b11, 1, 4).unwrap().to_string(), "10*a1 + 10*a2");
        assert!(chi_leading_exact(&b11, 1, 0).unwrap().is_zero());
        let b12 = WeightedSplitBundle::line_bundles(&ring, &[1, 2]).unwrap();
        assert_eq!(chi_leading_exact(&b12, 1, 4).unwrap().to_string(), "6*a1 + 3*a2");
        assert_eq!(chi_leading_asymptotic(&b11, 1).unwrap().to_string(), "a1 + a2");
        assert_eq!(chi_leading_asymptotic(&b12, 1).unwrap().to_string(), "1/2*a1 + 1/4*a2");
        assert_eq!(chi_leading_asymptotic(&b12, 0).unwrap().to_string(), "1/2");
    }

    #[test]
    fn higher_rank_summand_matches_its_flattening() {
        let ring = roots(2, 3);
        let v = |i: usize| GradedPoly::var(&ring, &format!("a{i}")).unwrap();
        let b = WeightedSplitBundle::new(
            &ring,
            vec![SplitFactor { roots: vec![v(1), v(2)], weight: 2 }, SplitFactor { roots: vec![v(3)], weight: 3 }],
        )
        .unwrap();
        let lines = WeightedSplitBundle::line_bundles(&ring, &[2, 2, 3]).unwrap();
        for n in 0..=2 {
            let top = b.whitney().unwrap().component(n).unwrap();
            assert_eq!(top, chi_leading_asymptotic(&b, n).unwrap());
            assert_eq!(top, chi_leading_asymptotic(&lines, n).unwrap());
        }
    }

    #[test]
    fn green_griffiths() {
        assert_eq!(gg_surface_coeffs(1).unwrap(), (int(1), int(1)));
        assert_eq!(gg_surface_coeffs(2).unwrap(), (rat(7, 4), rat(5, 4)));
        assert_eq!(gg_surface_coeffs(3).unwrap(), (rat(85, 36), rat(49, 36)));
        assert_eq!(gg_surface_class(1).unwrap().to_string(), "c1^2 - c2");
        assert_eq!(gg_surface_class(2).unwrap().render_over_common_denominator(), "(7*c1^2 - 5*c2)/8");
        assert_eq!(gg_surface_class(3).unwrap().render_over_common_denominator(), "(85*c1^2 - 49*c2)/216");
        for k in 1..=12 {
            assert_eq!(gg_surface_class(k).unwrap(), gg_surface_class_closed(k).unwrap());
        }
    }

    #[test]
    fn jet_ranks() {
        assert_eq!(jet_rank(1, 1, 7), BigUint::from(1u32));
        assert_eq!(jet_rank(2, 1, 2), BigUint::from(3u32));
        assert_eq!(jet_rank(1, 2, 3), BigUint::from(2u32));
        assert_eq!(jet_rank(3, 4, 0), BigUint::from(1u32));
    }
}
