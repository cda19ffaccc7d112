//! Weighted simplexes `Δ_a = {t ≥ 0 : Σ a_i t_i = 1}`: volumes, lattice
//! cells, monomial moments of the uniform probability measure and
//! expectations of products of affine forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, factorial_int, gcd_slice, to_f64, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct SimplexSpec {
    weights: Vec<u64>,
}

impl TryFrom<Vec<u64>> for SimplexSpec {
    type Error = Error;
    fn try_from(w: Vec<u64>) -> Result<Self> {
        SimplexSpec::new(w)
    }
}

impl From<SimplexSpec> for Vec<u64> {
    fn from(s: SimplexSpec) -> Self {
        s.weights
    }
}

impl SimplexSpec {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidSimplex("at least one weight is required".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidSimplex("weights must be positive".into()));
        }
        Ok(SimplexSpec { weights })
    }

    /// `Δ_(1,…,1)` with `r` coordinates.
    pub fn standard(r: usize) -> Self {
        SimplexSpec::new(vec![1; r]).expect("r must be positive")
    }

    /// The jet simplex: weights `1×r, 2×r, …, k×r`, coordinate `(j−1)·r + l`.
    pub fn jets(k: usize, r: usize) -> Self {
        let w = (1..=k as u64).flat_map(|j| std::iter::repeat(j).take(r)).collect();
        SimplexSpec::new(w).expect("k and r must be positive")
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn r(&self) -> usize {
        self.weights.len()
    }

    pub fn gcd(&self) -> u64 {
        gcd_slice(&self.weights)
    }

    fn product(&self) -> BigInt {
        self.weights.iter().fold(BigInt::one(), |acc, &w| acc * w)
    }

    fn sum_squares(&self) -> BigUint {
        self.weights.iter().map(|&w| BigUint::from(w) * w).sum()
    }

    /// Vertex `i` is `(1/a_i)·e_i`.
    pub fn vertex(&self, i: usize) -> Vec<Rational> {
        (0..self.r())
            .map(|j| {
                if j == i {
                    Rational::new(BigInt::one(), BigInt::from(self.weights[i]))
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }
}

/// `coeff · √radicand` with a squarefree radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub coeff: Rational,
    pub radicand: BigUint,
}

impl QuadraticSurd {
    pub fn new(coeff: Rational, radicand: BigUint) -> Self {
        if radicand.is_zero() || coeff.is_zero() {
            return QuadraticSurd { coeff: Rational::zero(), radicand: BigUint::one() };
        }
        let mut outside = BigUint::one();
        let mut rest = radicand;
        let mut p = BigUint::from(2u32);
        while &p * &p <= rest {
            let sq = &p * &p;
            while (&rest % &sq).is_zero() {
                rest /= &sq;
                outside *= &p;
            }
            p += 1u32;
        }
        QuadraticSurd { coeff: coeff * Rational::from_integer(outside.into()), radicand: rest }
    }

    /// Exact `self / other` when the radicands agree.
    pub fn ratio(&self, other: &QuadraticSurd) -> Option<Rational> {
        if other.coeff.is_zero() {
            return None;
        }
        if self.coeff.is_zero() {
            return Some(Rational::zero());
        }
        (self.radicand == other.radicand).then(|| &self.coeff / &other.coeff)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.coeff) * self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else if self.coeff.is_one() {
            write!(f, "sqrt({})", self.radicand)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

/// `constant + Σ coeffs_i t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl AffineForm {
    pub fn new(constant: Rational, coeffs: Vec<Rational>) -> Self {
        AffineForm { constant, coeffs }
    }

    pub fn linear(coeffs: Vec<Rational>) -> Self {
        AffineForm { constant: Rational::zero(), coeffs }
    }

    pub fn eval(&self, t: &[Rational]) -> Rational {
        self.coeffs.iter().zip(t).fold(self.constant.clone(), |acc, (c, x)| acc + c * x)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Zero::is_zero)
    }
}

fn check_arity(a: &SimplexSpec, got: usize) -> Result<()> {
    if a.r() == got {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected: a.r(), got })
    }
}

/// `√(Σa_i²) / ((r−1)!·Πa_i)`.
pub fn volume(a: &SimplexSpec) -> QuadraticSurd {
    let den = factorial_int(a.r() as u64 - 1) * a.product();
    QuadraticSurd::new(Rational::new(BigInt::one(), den), a.sum_squares())
}

/// Volume `1/r!` of the full-dimensional standard simplex in `ℝ^r`.
pub fn standard_volume(r: usize) -> Rational {
    Rational::new(BigInt::one(), factorial_int(r as u64))
}

/// Covolume `√(Σa_i²)/gcd(a)` of `H = {z ∈ ℤ^r : Σ a_i z_i = 0}`.
pub fn fundamental_domain_volume(a: &SimplexSpec) -> Result<QuadraticSurd> {
    if a.r() < 2 {
        return Err(Error::DegenerateLattice);
    }
    Ok(QuadraticSurd::new(Rational::new(BigInt::one(), BigInt::from(a.gcd())), a.sum_squares()))
}

/// `vol(Δ_a) / vol(H-cell) = gcd(a)/((r−1)!·Πa_i)`.
pub fn cell_ratio(a: &SimplexSpec) -> Result<Rational> {
    if a.r() < 2 {
        return Err(Error::DegenerateLattice);
    }
    Ok(Rational::new(BigInt::from(a.gcd()), factorial_int(a.r() as u64 - 1) * a.product()))
}

/// `E[Π t_i^{p_i}]` for `t` uniform on `Δ_a`.
pub fn monomial_moment(a: &SimplexSpec, p: &[u32]) -> Result<Rational> {
    check_arity(a, p.len())?;
    Ok(moment_unchecked(a.weights(), p))
}

fn moment_unchecked(weights: &[u64], p: &[u32]) -> Rational {
    let r = weights.len() as u64;
    let total: u64 = p.iter().map(|&x| x as u64).sum();
    let mut num = factorial(r - 1);
    let mut den = factorial(total + r - 1);
    for (&pi, &ai) in p.iter().zip(weights) {
        num *= factorial(pi as u64);
        den *= num_traits::pow(BigUint::from(ai), pi as usize);
    }
    Rational::new(num.into(), den.into())
}

/// `∫_0^1 t^u (1−t)^v dt = u!·v!/(u+v+1)!`.
pub fn beta_integral(u: u32, v: u32) -> Rational {
    let num = factorial(u as u64) * factorial(v as u64);
    Rational::new(num.into(), factorial(u as u64 + v as u64 + 1).into())
}

/// The `r×(r−1)` matrix with `diag(α_1..α_{r−1})` on top and a last row of `α_r`.
pub fn gram_generator(alpha: &[Rational]) -> Vec<Vec<Rational>> {
    let r = alpha.len();
    let mut m = vec![vec![Rational::zero(); r - 1]; r];
    for i in 0..r - 1 {
        m[i][i] = alpha[i].clone();
        m[r - 1][i] = alpha[r - 1].clone();
    }
    m
}

/// Gram determinant of [`gram_generator`], in closed form `Πα_i²·Σ1/α_i²`.
pub fn gram_det(alpha: &[Rational]) -> Result<Rational> {
    if alpha.len() < 2 {
        return Err(Error::SingularInput("need at least two entries".into()));
    }
    if alpha.iter().any(Zero::is_zero) {
        return Err(Error::SingularInput("zero entry".into()));
    }
    let prod = alpha.iter().fold(Rational::one(), |acc, x| acc * x * x);
    let inv = alpha.iter().fold(Rational::zero(), |acc, x| acc + (x * x).recip());
    Ok(prod * inv)
}

/// Sparse polynomial in the simplex coordinates, keyed by exponent vector.
pub type SparsePoly = BTreeMap<Vec<u32>, Rational>;

/// Multiplies the forms out into a sparse polynomial in `t`.
pub fn expand_product(r: usize, forms: &[AffineForm]) -> Result<SparsePoly> {
    let mut acc: SparsePoly = BTreeMap::new();
    acc.insert(vec![0; r], Rational::one());
    for f in forms {
        if f.coeffs.len() != r {
            return Err(Error::ArityMismatch { expected: r, got: f.coeffs.len() });
        }
        let mut next: SparsePoly = BTreeMap::new();
        for (e, c) in &acc {
            if !f.constant.is_zero() {
                *next.entry(e.clone()).or_insert_with(Rational::zero) += c * &f.constant;
            }
            for (i, fc) in f.coeffs.iter().enumerate() {
                if fc.is_zero() {
                    continue;
                }
                let mut e2 = e.clone();
                e2[i] += 1;
                *next.entry(e2).or_insert_with(Rational::zero) += c * fc;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    Ok(acc)
}

/// Integrates a sparse polynomial against the uniform measure on `Δ_a`.
pub fn polynomial_expectation(a: &SimplexSpec, poly: &SparsePoly) -> Result<Rational> {
    let mut total = Rational::zero();
    for (e, c) in poly {
        check_arity(a, e.len())?;
        total += c * moment_unchecked(a.weights(), e);
    }
    Ok(total)
}

/// `E[Π_f f(T)]` for `T` uniform on `Δ_a`.
pub fn affine_product_expectation(a: &SimplexSpec, forms: &[AffineForm]) -> Result<Rational> {
    let poly = expand_product(a.r(), forms)?;
    polynomial_expectation(a, &poly)
}
