//! Truncated weighted graded polynomial rings over the rationals.
//!
//! A [`Ring`] fixes an ordered list of variables, each with a positive
//! weight, and a bound `n`. Every [`GradedPoly`] drops the terms whose
//! weighted degree exceeds `n`, so multiplication computes in the quotient by
//! the ideal of high-degree monomials.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use crate::arith::Rational;
use crate::arith::pow_rational;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    bound: u32,
    vars: Vec<(String, u32)>,
}

impl Ring {
    pub fn new<S: Into<String>>(bound: u32, vars: Vec<(S, u32)>) -> Result<Arc<Ring>> {
        let vars: Vec<(String, u32)> = vars.into_iter().map(|(s, w)| (s.into(), w)).collect();
        for (i, (name, w)) in vars.iter().enumerate() {
            if *w == 0 {
                return Err(Error::InvalidRing(format!("variable `{name}` has weight 0")));
            }
            if name.is_empty() {
                return Err(Error::InvalidRing("empty variable name".into()));
            }
            if vars[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::InvalidRing(format!("duplicate variable `{name}`")));
            }
        }
        Ok(Arc::new(Ring { bound, vars }))
    }

    /// Ring of `r` degree-one variables `prefix1 .. prefixr`.
    pub fn chern_roots(bound: u32, prefix: &str, r: usize) -> Arc<Ring> {
        let vars = (1..=r).map(|i| (format!("{prefix}{i}"), 1)).collect();
        Ring::new(bound, vars).expect("generated names are distinct")
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn vars(&self) -> &[(String, u32)] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(v, _)| v == name)
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u64 {
        exps.iter()
            .zip(&self.vars)
            .map(|(&e, (_, w))| e as u64 * *w as u64)
            .sum()
    }
}

fn compatible(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone)]
pub struct GradedPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        compatible(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl GradedPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        GradedPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        let mut p = Self::zero(ring);
        p.insert(vec![0; ring.nvars()], c);
        p
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        let mut exps = vec![0; ring.nvars()];
        exps[i] = 1;
        Self::monomial(ring, exps, Rational::one())
    }

    /// `c · x^exps`; zero when the degree exceeds the bound.
    pub fn monomial(ring: &Arc<Ring>, exps: Vec<u32>, c: Rational) -> Result<Self> {
        if exps.len() != ring.nvars() {
            return Err(Error::ArityMismatch { expected: ring.nvars(), got: exps.len() });
        }
        let mut p = Self::zero(ring);
        if ring.weighted_degree(&exps) <= ring.bound as u64 {
            p.insert(exps, c);
        }
        Ok(p)
    }

    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(ring);
        for (exps, c) in terms {
            p = p.add(&Self::monomial(ring, exps, c)?)?;
        }
        Ok(p)
    }

    fn insert(&mut self, exps: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the monomial named by `(var, exponent)` pairs.
    pub fn coeff_of(&self, monomial: &[(&str, u32)]) -> Result<Rational> {
        let mut exps = vec![0; self.ring.nvars()];
        for (name, e) in monomial {
            let i = self.ring.index_of(name).ok_or_else(|| Error::UnknownVariable((*name).into()))?;
            exps[i] += e;
        }
        Ok(self.coeff(&exps))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if compatible(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::IncompatibleRing)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        GradedPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let bound = self.ring.bound as u64;
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            let d1 = self.ring.weighted_degree(e1);
            for (e2, c2) in &other.terms {
                if d1 + self.ring.weighted_degree(e2) > bound {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(GradedPoly { ring: self.ring.clone(), terms: acc })
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(&self.ring);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Terms of weighted degree exactly `d`.
    pub fn component(&self, d: u32) -> Result<Self> {
        if d > self.ring.bound {
            return Err(Error::OutOfRange { degree: d, bound: self.ring.bound });
        }
        Ok(GradedPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| self.ring.weighted_degree(e) == d as u64)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Substitutes `v ↦ factors[v]·v` for every variable.
    pub fn scale_vars(&self, factors: &HashMap<String, Rational>) -> Result<Self> {
        let per_var: Vec<&Rational> = self
            .ring
            .vars
            .iter()
            .map(|(name, _)| factors.get(name).ok_or_else(|| Error::IncompleteSubstitution(name.clone())))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut c = c.clone();
            for (&k, f) in e.iter().zip(&per_var) {
                c *= pow_rational(f, k);
            }
            out.insert(e.clone(), c);
        }
        Ok(out)
    }

    /// Evaluates at `x_i ↦ images[i]`, computing in the ring `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[GradedPoly]) -> Result<GradedPoly> {
        if images.len() != self.ring.nvars() {
            return Err(Error::ArityMismatch { expected: self.ring.nvars(), got: images.len() });
        }
        let one = GradedPoly::one(target);
        let mut powers: Vec<Vec<GradedPoly>> = images.iter().map(|_| vec![one.clone()]).collect();
        let mut out = GradedPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = GradedPoly::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("starts with 1").mul(&images[i])?;
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    fn ordered_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            self.ring
                .weighted_degree(a)
                .cmp(&self.ring.weighted_degree(b))
                .then_with(|| b.cmp(a))
        });
        v
    }

    fn render_monomial(&self, exps: &[u32]) -> String {
        exps.iter()
            .zip(&self.ring.vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, (name, _))| if *e == 1 { name.clone() } else { format!("{name}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }

    fn render_with<F>(&self, coeff: F) -> String
    where
        F: Fn(&Rational) -> Rational,
    {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (exps, c)) in self.ordered_terms().into_iter().enumerate() {
            let c = coeff(c);
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = self.render_monomial(exps);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// Like `Display`, but with one common denominator pulled out:
    /// `(85*c1^2 - 49*c2)/216`.
    pub fn render_over_common_denominator(&self) -> String {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        if den.is_one() {
            return self.to_string();
        }
        let scale = Rational::from_integer(den.clone());
        format!("({})/{}", self.render_with(|c| c * &scale), den)
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(|c| c.clone()))
    }
}

pub fn poly_add(p: &GradedPoly, q: &GradedPoly) -> Result<GradedPoly> {
    p.add(q)
}

pub fn poly_mul(p: &GradedPoly, q: &GradedPoly) -> Result<GradedPoly> {
    p.mul(q)
}

pub fn poly_component(p: &GradedPoly, d: u32) -> Result<GradedPoly> {
    p.component(d)
}

pub fn poly_scale_vars(p: &GradedPoly, factors: &HashMap<String, Rational>) -> Result<GradedPoly> {
    p.scale_vars(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn chern2() -> Arc<Ring> {
        Ring::new(2, vec![("c1", 1), ("c2", 2)]).unwrap()
    }

    fn c1c2(ring: &Arc<Ring>, c0: Rational, a: Rational, b: Rational, c: Rational) -> GradedPoly {
        GradedPoly::from_terms(ring, vec![(vec![0, 0], c0), (vec![1, 0], a), (vec![2, 0], b), (vec![0, 1], c)]).unwrap()
    }

    #[test]
    fn additive_examples() {
        let r = Ring::new(2, vec![("c1", 1)]).unwrap();
        let c1 = GradedPoly::var(&r, "c1").unwrap();
        let p = GradedPoly::one(&r).add(&c1).unwrap();
        assert!(p.add(&p.neg()).unwrap().is_zero());
        assert_eq!(p.add(&GradedPoly::zero(&r)).unwrap(), p);
        assert_eq!(c1.add(&c1).unwrap().to_string(), "2*c1");
    }

    #[test]
    fn truncated_product() {
        let r = Ring::new(2, vec![("c1", 1)]).unwrap();
        let p = GradedPoly::from_terms(&r, vec![(vec![0], int(1)), (vec![1], int(1)), (vec![2], int(1))]).unwrap();
        let q = GradedPoly::from_terms(&r, vec![(vec![0], int(1)), (vec![1], int(1))]).unwrap();
        assert_eq!(p.mul(&q).unwrap().to_string(), "1 + 2*c1 + 2*c1^2");
        assert_eq!(p.mul(&GradedPoly::one(&r)).unwrap(), p);
    }

    #[test]
    fn two_segre_series_product() {
        let r = chern2();
        let s1 = c1c2(&r, int(1), int(-1), int(1), int(-1));
        let s2 = c1c2(&r, int(1), rat(-1, 2), rat(1, 4), rat(-1, 4));
        let prod = s1.mul(&s2).unwrap();
        assert_eq!(prod.to_string(), "1 - 3/2*c1 + 7/4*c1^2 - 5/4*c2");
        let top = prod.component(2).unwrap();
        assert_eq!(top.to_string(), "7/4*c1^2 - 5/4*c2");
        assert_eq!(top.scale(&rat(1, 2)).render_over_common_denominator(), "(7*c1^2 - 5*c2)/8");
        assert_eq!(prod.component(0).unwrap().to_string(), "1");
        assert_eq!(prod.component(3), Err(Error::OutOfRange { degree: 3, bound: 2 }));
    }

    #[test]
    fn scaling_variables() {
        let r = Ring::new(2, vec![("a", 1)]).unwrap();
        let p = GradedPoly::from_terms(&r, vec![(vec![0], int(1)), (vec![1], int(1)), (vec![2], int(1))]).unwrap();
        let f: HashMap<String, Rational> = [("a".to_string(), rat(1, 3))].into();
        assert_eq!(p.scale_vars(&f).unwrap().to_string(), "1 + 1/3*a + 1/9*a^2");
        let id: HashMap<String, Rational> = [("a".to_string(), int(1))].into();
        assert_eq!(p.scale_vars(&id).unwrap(), p);
        assert_eq!(p.scale_vars(&HashMap::new()), Err(Error::IncompleteSubstitution("a".into())));
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let r1 = Ring::new(2, vec![("x", 1)]).unwrap();
        let r2 = Ring::new(3, vec![("x", 1)]).unwrap();
        let a = GradedPoly::one(&r1);
        let b = GradedPoly::one(&r2);
        assert_eq!(a.add(&b), Err(Error::IncompatibleRing));
        assert_eq!(a.mul(&b), Err(Error::IncompatibleRing));
        // structurally equal rings built separately are compatible
        let r3 = Ring::new(2, vec![("x", 1)]).unwrap();
        assert!(a.add(&GradedPoly::one(&r3)).is_ok());
    }

    #[test]
    fn bad_rings() {
        assert!(Ring::new(2, vec![("x", 0)]).is_err());
        assert!(Ring::new(2, vec![("x", 1), ("x", 2)]).is_err());
    }

    #[test]
    fn rendering() {
        let r = chern2();
        assert_eq!(GradedPoly::zero(&r).to_string(), "0");
        let p = c1c2(&r, int(0), int(-1), int(0), int(-3));
        assert_eq!(p.to_string(), "-c1 - 3*c2");
        let mixed = GradedPoly::monomial(&Ring::new(3, vec![("x", 1), ("y", 1)]).unwrap(), vec![1, 2], rat(-2, 3)).unwrap();
        assert_eq!(mixed.to_string(), "-2/3*x*y^2");
    }
}
