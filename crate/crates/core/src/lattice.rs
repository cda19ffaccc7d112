//! Weighted compositions `H_m = {l ∈ ℕ^r : Σ a_i l_i = m}`, power sums over
//! them, their leading asymptotics, and the half-open cone cells of the
//! sublattice `H = {z ∈ ℤ^r : Σ a_i z_i = 0}`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factorial_int, Rational};
use crate::error::{Error, Result};
use crate::linalg::{det_int, solve};
use crate::ring::{GradedPoly, Ring};
use crate::simplex::SimplexSpec;

/// All `p ∈ ℕ^r` with `|p| = n`, lexicographically descending.
pub fn multi_indices(r: usize, n: u32) -> Vec<Vec<u32>> {
    fn rec(r: usize, n: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == r {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in (0..=n).rev() {
            prefix.push(x);
            rec(r, n - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(r, n, &mut Vec::with_capacity(r), &mut out);
    out
}

/// Streams `H_m` in lexicographically descending order.
pub struct Compositions {
    w: Vec<u64>,
    suffix_gcd: Vec<u64>,
    l: Vec<u64>,
    rem: Vec<u64>,
    started: bool,
    done: bool,
}

pub fn enumerate_compositions(a: &SimplexSpec, m: u64) -> Compositions {
    let w = a.weights().to_vec();
    let r = w.len();
    let mut suffix_gcd = vec![0; r + 1];
    for i in (0..r).rev() {
        suffix_gcd[i] = suffix_gcd[i + 1].gcd(&w[i]);
    }
    let mut rem = vec![0; r + 1];
    rem[0] = m;
    let done = m % suffix_gcd[0] != 0;
    Compositions { w, suffix_gcd, l: vec![0; r], rem, started: false, done }
}

impl Compositions {
    /// Largest `x' ≤ x` at position `i` leaving a remainder the suffix can absorb.
    fn fit(&self, i: usize, x: u64) -> Option<u64> {
        let g = self.suffix_gcd[i + 1];
        let rem = self.rem[i];
        let step = if g == 0 { 1 } else { g / self.suffix_gcd[i] };
        let mut x = x;
        for _ in 0..step.max(1) {
            let left = rem - self.w[i] * x;
            let ok = if g == 0 { left == 0 } else { left % g == 0 };
            if ok {
                return Some(x);
            }
            x = x.checked_sub(1)?;
        }
        None
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let r = self.w.len();
        let (mut i, mut cand) = if !self.started {
            self.started = true;
            (0, Some(self.rem[0] / self.w[0]))
        } else if r == 1 {
            self.done = true;
            return None;
        } else {
            (r - 2, self.l[r - 2].checked_sub(1))
        };
        loop {
            match cand.and_then(|x| self.fit(i, x)) {
                Some(x) => {
                    self.l[i] = x;
                    self.rem[i + 1] = self.rem[i] - self.w[i] * x;
                    if i + 1 == r {
                        return Some(self.l.clone());
                    }
                    i += 1;
                    cand = Some(self.rem[i] / self.w[i]);
                }
                None => {
                    if i == 0 {
                        self.done = true;
                        return None;
                    }
                    i -= 1;
                    cand = self.l[i].checked_sub(1);
                }
            }
        }
    }
}

fn check_arity(a: &SimplexSpec, got: usize) -> Result<()> {
    if a.r() == got {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected: a.r(), got })
    }
}

fn monomial_over_factorials(l: &[u64], p: &[u32]) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (&li, &pi) in l.iter().zip(p) {
        num *= num_traits::pow(BigInt::from(li), pi as usize);
        den *= factorial_int(pi as u64);
    }
    Rational::new(num, den)
}

/// `Σ_{l ∈ H_m} Π l_i^{p_i}/p_i!`.
pub fn power_sum(a: &SimplexSpec, p: &[u32], m: u64) -> Result<Rational> {
    check_arity(a, p.len())?;
    Ok(enumerate_compositions(a, m).map(|l| monomial_over_factorials(&l, p)).sum())
}

/// Coefficient `gcd(a)/Π a_i^{p_i+1}` of `m^{|p|+r−1}/(|p|+r−1)!` in [`power_sum`].
pub fn power_sum_asymptotic(a: &SimplexSpec, p: &[u32]) -> Result<Rational> {
    check_arity(a, p.len())?;
    let den = a
        .weights()
        .iter()
        .zip(p)
        .fold(BigInt::one(), |acc, (&w, &pi)| acc * num_traits::pow(BigInt::from(w), pi as usize + 1));
    Ok(Rational::new(BigInt::from(a.gcd()), den))
}

fn check_root_ring(ring: &Arc<Ring>, r: usize, n: u32) -> Result<()> {
    if ring.nvars() != r {
        return Err(Error::ArityMismatch { expected: r, got: ring.nvars() });
    }
    if let Some((name, _)) = ring.vars().iter().find(|(_, w)| *w != 1) {
        return Err(Error::InvalidRing(format!("variable `{name}` must have weight 1")));
    }
    if ring.bound() < n {
        return Err(Error::OutOfRange { degree: n, bound: ring.bound() });
    }
    Ok(())
}

/// `Σ_{l ∈ H_m} (Σ α_i l_i)^n / n!` in a ring of `r` weight-one variables.
pub fn weighted_power_poly_sum(ring: &Arc<Ring>, a: &SimplexSpec, n: u32, m: u64) -> Result<GradedPoly> {
    check_root_ring(ring, a.r(), n)?;
    let ps = multi_indices(a.r(), n);
    // integer sums of Π l_i^{p_i}; the factorials are divided out once at the end
    let mut sums = vec![BigInt::zero(); ps.len()];
    for l in enumerate_compositions(a, m) {
        for (s, p) in sums.iter_mut().zip(&ps) {
            let mut prod = BigInt::one();
            for (&li, &pi) in l.iter().zip(p) {
                prod *= num_traits::pow(BigInt::from(li), pi as usize);
            }
            *s += prod;
        }
    }
    let terms = ps.into_iter().zip(sums).map(|(p, s)| {
        let den = p.iter().fold(BigInt::one(), |acc, &pi| acc * factorial_int(pi as u64));
        (p, Rational::new(s, den))
    });
    GradedPoly::from_terms(ring, terms)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    pub vectors: Vec<Vec<BigInt>>,
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.x, e.y)
}

/// A basis of `H` built one coordinate at a time. Entry `j−1` is the kernel
/// vector that introduces coordinate `j`.
pub fn lattice_basis(a: &SimplexSpec) -> Result<LatticeBasis> {
    let r = a.r();
    if r < 2 {
        return Err(Error::DegenerateLattice);
    }
    let w: Vec<BigInt> = a.weights().iter().map(|&x| BigInt::from(x)).collect();
    // invariant: Σ w_i·cur_i = g_prev
    let mut cur = vec![BigInt::zero(); r];
    cur[0] = BigInt::one();
    let mut g_prev = w[0].clone();
    let mut vectors = Vec::with_capacity(r - 1);
    for j in 1..r {
        let g = g_prev.gcd(&w[j]);
        let mut v: Vec<BigInt> = cur.iter().map(|x| x * (&w[j] / &g)).collect();
        v[j] -= &g_prev / &g;
        vectors.push(v);
        let (x, y) = if w[j] == g {
            (BigInt::zero(), BigInt::one())
        } else if g_prev == g {
            (BigInt::one(), BigInt::zero())
        } else {
            ext_gcd(&g_prev, &w[j])
        };
        for c in cur.iter_mut() {
            *c *= &x;
        }
        cur[j] += y;
        g_prev = g;
    }
    Ok(LatticeBasis { vectors })
}

impl LatticeBasis {
    /// Signed maximal minors: entry `i` is `(−1)^i` times the minor without column `i`.
    pub fn plucker(&self) -> Vec<BigInt> {
        let r = self.vectors.len() + 1;
        (0..r)
            .map(|skip| {
                let m: Vec<Vec<BigInt>> = self
                    .vectors
                    .iter()
                    .map(|v| v.iter().enumerate().filter(|(c, _)| *c != skip).map(|(_, x)| x.clone()).collect())
                    .collect();
                let d = det_int(&m);
                if skip % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .collect()
    }

    /// The vectors lie in `H` and generate it: the minors are `±a/gcd(a)`.
    pub fn is_basis_of(&self, a: &SimplexSpec) -> bool {
        let r = a.r();
        if self.vectors.len() + 1 != r || self.vectors.iter().any(|v| v.len() != r) {
            return false;
        }
        let in_h = self.vectors.iter().all(|v| {
            v.iter().zip(a.weights()).map(|(x, &w)| x * BigInt::from(w)).sum::<BigInt>().is_zero()
        });
        if !in_h {
            return false;
        }
        let g = a.gcd();
        let target: Vec<BigInt> = a.weights().iter().map(|&w| BigInt::from(w / g)).collect();
        let pl = self.plucker();
        let neg: Vec<BigInt> = target.iter().map(|x| -x).collect();
        pl == target || pl == neg
    }
}

/// `|(ℝ₊·C_u) ∩ H_m|` for the half-open cell `C_u = u + Σ[0,1)·v_j` of
/// [`lattice_basis`].
pub fn count_cone_points(a: &SimplexSpec, m0: u64, u: &[u64], m: u64) -> Result<u64> {
    let basis = lattice_basis(a)?;
    count_cone_points_with_basis(a, &basis, m0, u, m)
}

pub fn count_cone_points_with_basis(a: &SimplexSpec, basis: &LatticeBasis, m0: u64, u: &[u64], m: u64) -> Result<u64> {
    let r = a.r();
    if r < 2 {
        return Err(Error::DegenerateLattice);
    }
    if u.len() != r {
        return Err(Error::ArityMismatch { expected: r, got: u.len() });
    }
    if m0 == 0 {
        return Err(Error::InvalidCell("m0 must be positive".into()));
    }
    let level: u64 = u.iter().zip(a.weights()).map(|(x, w)| x * w).sum();
    if level != m0 {
        return Err(Error::InvalidCell(format!("u lies at level {level}, expected {m0}")));
    }
    if m < m0 {
        return Err(Error::InvalidCell(format!("m = {m} is below m0 = {m0}")));
    }
    if !basis.is_basis_of(a) {
        return Err(Error::InvalidCell("basis does not generate the lattice".into()));
    }
    // The minor without the last column is ±a_r/gcd ≠ 0, so the first r−1
    // coordinates determine the basis coordinates.
    let sys: Vec<Vec<Rational>> = (0..r - 1)
        .map(|row| basis.vectors.iter().map(|v| Rational::from_integer(v[row].clone())).collect())
        .collect();
    let scale = Rational::new(BigInt::from(m0), BigInt::from(m));
    let mut count = 0u64;
    for l in enumerate_compositions(a, m) {
        let rhs: Vec<Rational> = (0..r - 1)
            .map(|i| &scale * BigInt::from(l[i]) - Rational::from_integer(BigInt::from(u[i])))
            .collect();
        let c = solve(&sys, &rhs).ok_or_else(|| Error::SingularInput("cell system".into()))?;
        if c.iter().all(|x| !x.is_negative() && *x < Rational::one()) {
            count += 1;
        }
    }
    Ok(count)
}
