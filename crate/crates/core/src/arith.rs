//! Small exact-arithmetic helpers shared by the other modules.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn factorial_int(n: u64) -> BigInt {
    BigInt::from(factorial(n))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn gcd_slice(values: &[u64]) -> u64 {
    values.iter().fold(0u64, |g, &v| g.gcd(&v))
}

/// `H_k = 1 + 1/2 + ... + 1/k`.
pub fn harmonic(k: u64) -> Rational {
    (1..=k).fold(Rational::zero(), |acc, j| acc + rat(1, j as i64))
}

/// `Σ_{j ≤ k} 1/j²`.
pub fn harmonic_squares(k: u64) -> Rational {
    (1..=k).fold(Rational::zero(), |acc, j| {
        let j = j as i64;
        acc + rat(1, j * j)
    })
}

pub fn pow_rational(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        if d.is_infinite() && n.is_infinite() {
            f64::NAN
        } else {
            n / d
        }
    })
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Canonical rendering: `p` for integers, `p/q` otherwise, lowest terms, `q > 0`.
pub fn render(x: &Rational) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), BigUint::one());
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(40, 20), BigUint::from(137_846_528_820u64));
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(1), int(1));
        assert_eq!(harmonic(2), rat(3, 2));
        assert_eq!(harmonic(3), rat(11, 6));
        assert_eq!(harmonic_squares(2), rat(5, 4));
    }

    #[test]
    fn rendering_is_canonical() {
        assert_eq!(render(&rat(2, -4)), "-1/2");
        assert_eq!(render(&rat(6, 3)), "2");
        assert_eq!(parse_rational(" 3/6 "), Some(rat(1, 2)));
        assert_eq!(parse_rational("-7"), Some(int(-7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
