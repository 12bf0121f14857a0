//! Dense univariate and sparse multivariate polynomials.

use crate::scalar::{Ring, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense polynomial in one formal variable (τ or z); trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<S> {
    coef: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coef: Vec<S>) -> Self {
        while coef.last().is_some_and(|c| c.is_zero()) {
            coef.pop();
        }
        Self { coef }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    pub fn coef(&self) -> &[S] {
        &self.coef
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coef.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coef.len() as isize - 1
    }

    pub fn eval(&self, at: &S) -> S {
        self.coef.iter().rev().fold(S::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coef.iter().enumerate().skip(1).map(|(i, c)| c.clone() * S::from_usize(i)).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coef.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.coef.iter().take(n).cloned().collect())
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let n = self.coef.len().max(o.coef.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let n = self.coef.len().max(o.coef.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coef.into_iter().map(|c| -c).collect())
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.coef.is_empty() || o.coef.is_empty() {
            return Self::new(vec![]);
        }
        let mut out = vec![S::zero(); self.coef.len() + o.coef.len() - 1];
        for (i, a) in self.coef.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coef.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<S: Scalar> Zero for Poly<S> {
    fn zero() -> Self {
        Self::new(vec![])
    }
    fn is_zero(&self) -> bool {
        self.coef.is_empty()
    }
}

impl<S: Scalar> One for Poly<S> {
    fn one() -> Self {
        Self::constant(S::one())
    }
}

impl<S: Scalar> Ring for Poly<S> {
    fn from_int(n: i64) -> Self {
        Self::constant(S::from_i64(n))
    }
}

/// Sparse polynomial with integer coefficients in ε_1, ε_2, …
/// Monomials are exponent vectors without trailing zeros.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    /// ε_i (1-based).
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i];
        e[i - 1] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    fn insert(&mut self, mono: Vec<u32>, c: BigInt) {
        let e = self.terms.entry(mono).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Add for MPoly {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (m, c) in o.terms {
            self.insert(m, c);
        }
        self
    }
}

impl Neg for MPoly {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for MPoly {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for MPoly {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = MPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let n = ma.len().max(mb.len());
                let e: Vec<u32> =
                    (0..n).map(|i| ma.get(i).copied().unwrap_or(0) + mb.get(i).copied().unwrap_or(0)).collect();
                out.insert(trim(e), ca * cb);
            }
        }
        out
    }
}

impl Zero for MPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MPoly {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl Ring for MPoly {
    fn from_int(n: i64) -> Self {
        let mut p = Self::default();
        if n != 0 {
            p.terms.insert(Vec::new(), BigInt::from(n));
        }
        p
    }
}
