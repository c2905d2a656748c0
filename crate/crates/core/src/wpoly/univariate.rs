//! Dense univariate polynomials over a field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Field;
use crate::Rat;

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Invariant: the coefficient vector has no trailing zeros, so the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly<K> {
    coeffs: Vec<K>,
}

impl<K: Field> UPoly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly { coeffs: vec![K::one()] }
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * t^n`.
    pub fn monomial(n: usize, c: K) -> Self {
        let mut v = vec![K::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    /// `t - root`.
    pub fn linear_root(root: K) -> Self {
        Self::new(vec![-root, K::one()])
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    /// Order of vanishing at `t = 0`; `None` for the zero polynomial.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = K::one() / self.leading();
        self.scale(&inv)
    }

    pub fn eval(&self, t: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * K::from_usize(i).expect("index fits the scalar"))
            .collect();
        Self::new(v)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = K::one() / divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![K::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() * lc_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient, if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1.monic();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `p(t^s)`.
    pub fn inflate(&self, s: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![K::zero(); (self.coeffs.len() - 1) * s + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * s] = c.clone();
        }
        Self::new(v)
    }

    /// `p(t + a)`.
    pub fn shift(&self, a: &K) -> Self {
        // Horner in the ring of polynomials: p(t+a) = (...(c_n (t+a) + c_{n-1})(t+a) ...).
        let step = Self::new(vec![a.clone(), K::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &step) + &Self::constant(c.clone());
        }
        acc
    }

    /// Removes the largest power of `t` dividing the polynomial and returns its exponent.
    pub fn strip_t_power(&self) -> (usize, Self) {
        match self.low_degree() {
            None => (0, self.clone()),
            Some(k) => (k, Self::new(self.coeffs[k..].to_vec())),
        }
    }
}

impl<K: Field> Add for &UPoly<K> {
    type Output = UPoly<K>;
    fn add(self, rhs: &UPoly<K>) -> UPoly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<K: Field> Sub for &UPoly<K> {
    type Output = UPoly<K>;
    fn sub(self, rhs: &UPoly<K>) -> UPoly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<K: Field> Mul for &UPoly<K> {
    type Output = UPoly<K>;
    fn mul(self, rhs: &UPoly<K>) -> UPoly<K> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(v)
    }
}

impl<K: Field> Neg for &UPoly<K> {
    type Output = UPoly<K>;
    fn neg(self) -> UPoly<K> {
        UPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Display for UPoly<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = super::Poly::from_univariate(1, 0, self);
        write!(f, "{}", p.to_string_with(&["t"]))
    }
}

impl<K: Field> fmt::Debug for UPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly{:?}", self.coeffs)
    }
}

impl<K: Field> Zero for UPoly<K> {
    fn zero() -> Self {
        UPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<K: Field> Add for UPoly<K> {
    type Output = UPoly<K>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<K: Field> One for UPoly<K> {
    fn one() -> Self {
        UPoly::one()
    }
}

impl<K: Field> Mul for UPoly<K> {
    type Output = UPoly<K>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}
