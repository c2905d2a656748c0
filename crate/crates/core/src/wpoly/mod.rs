//! Sparse multivariate polynomials with weighted orders.
//!
//! Variables are positional. The printable names are `x, y, z` for the first three
//! coordinates and `x3, x4, ...` beyond that; [`Poly::to_string_with`] accepts custom names.

pub mod factor;
mod parse;
pub mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::Rat;
pub use factor::{factor_univariate, rational_gcd, rational_roots, Factorization};
pub use univariate::UPoly;

/// Coefficient ring for [`Poly`].
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + FromPrimitive
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// A [`Scalar`] with exact division.
pub trait Field: Scalar + Div<Output = Self> {}

impl<T: Scalar + Div<Output = T>> Field for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("exponent {exponent} of variable {var} is not divisible by {divisor}")]
    NotDivisible { var: usize, divisor: u32, exponent: u32 },
    #[error("non-rational center: {0}")]
    NonRationalCenter(String),
}

/// Exponent vector of a monomial.
pub type Exps = Vec<u32>;

/// Sparse polynomial in `nvars` variables.
///
/// Invariant: no stored coefficient is zero and every key has length `nvars`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<K> {
    nvars: usize,
    terms: BTreeMap<Exps, K>,
}

/// Polynomial with exact rational coefficients.
pub type WPoly = Poly<Rat>;

/// A weighted-homogeneous piece of a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct WHomogPiece<K> {
    pub weights: Vec<i64>,
    pub degree: i64,
    pub part: Poly<K>,
}

/// Weighted degree of an exponent vector.
pub fn w_degree(exps: &[u32], weights: &[i64]) -> i64 {
    exps.iter().zip(weights).map(|(&e, &w)| i64::from(e) * w).sum()
}

impl<K: Scalar> Poly<K> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, K::one())
    }

    pub fn constant(nvars: usize, c: K) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Exps, c: K) -> Self {
        let mut p = Poly { nvars: exps.len(), terms: BTreeMap::new() };
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, K::one())
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging repeated monomials.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, K)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exps, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> K {
        self.terms.get(exps).cloned().unwrap_or_else(K::zero)
    }

    pub fn constant_term(&self) -> K {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, a)| (e.clone(), a.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Order at the origin (lowest total degree); `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn min_degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    /// Componentwise minimum of the exponents (the largest monomial dividing `self`).
    pub fn monomial_content(&self) -> Exps {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.nvars];
        };
        let mut m = first.clone();
        for e in it {
            for (a, b) in m.iter_mut().zip(e) {
                *a = (*a).min(*b);
            }
        }
        m
    }

    /// Exact division by the monomial `x^exps`, if it divides.
    pub fn div_monomial(&self, exps: &[u32]) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut q = e.clone();
            for (a, b) in q.iter_mut().zip(exps) {
                *a = a.checked_sub(*b)?;
            }
            out.terms.insert(q, c.clone());
        }
        Some(out)
    }

    pub fn mul_monomial(&self, exps: &[u32]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let m: Exps = e.iter().zip(exps).map(|(a, b)| a + b).collect();
            (m, c.clone())
        });
        Poly { nvars: self.nvars, terms: terms.collect() }
    }

    /// Pull-back by a monomial map: variable `i` becomes `prod_j y_j^{images[i][j]}`.
    pub fn pullback(&self, images: &[Exps]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(0, Vec::len);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut m = vec![0u32; target];
            for (ei, img) in e.iter().zip(images) {
                for (mj, ij) in m.iter_mut().zip(img) {
                    *mj += ei * ij;
                }
            }
            out.add_term(m, c.clone());
        }
        out
    }

    /// Substitutes polynomials for the variables: `x_i := images[i]`.
    pub fn compose(&self, images: &[Poly<K>]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Poly<K>>> = images.iter().map(|p| vec![Poly::one(p.nvars)]).collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &ei) in e.iter().enumerate() {
                while powers[i].len() <= ei as usize {
                    let next = powers[i].last().expect("nonempty") * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][ei as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// `x_var := x_var + c`.
    pub fn translate(&self, var: usize, c: &K) -> Self {
        let images: Vec<Poly<K>> = (0..self.nvars)
            .map(|i| {
                let v = Poly::var(self.nvars, i);
                if i == var {
                    &v + &Poly::constant(self.nvars, c.clone())
                } else {
                    v
                }
            })
            .collect();
        self.compose(&images)
    }

    /// `h(x + x0)` for a point `x0`.
    pub fn translate_point(&self, point: &[K]) -> Self {
        let images: Vec<Poly<K>> = (0..self.nvars)
            .map(|i| &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, point[i].clone()))
            .collect();
        self.compose(&images)
    }

    /// Sets `x_var := c`; the variable stays in the ring but no longer occurs.
    pub fn eval_var(&self, var: usize, c: &K) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            let mut m = e.clone();
            let k = m[var];
            m[var] = 0;
            out.add_term(m, a.clone() * pow_scalar(c, k));
        }
        out
    }

    pub fn eval(&self, point: &[K]) -> K {
        let mut acc = K::zero();
        for (e, a) in &self.terms {
            let mut t = a.clone();
            for (x, &k) in point.iter().zip(e) {
                t = t * pow_scalar(x, k);
            }
            acc = acc + t;
        }
        acc
    }

    /// Coefficients with respect to `var`: `self = sum_k out[k] * x_var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly<K>> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(self.nvars); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, a) in &self.terms {
            let mut m = e.clone();
            let k = m[var] as usize;
            m[var] = 0;
            out[k].terms.insert(m, a.clone());
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut m = e.clone();
            m[var] -= 1;
            let k = K::from_u32(e[var]).expect("exponent fits the scalar");
            out.add_term(m, a.clone() * k);
        }
        out
    }

    /// Replaces every exponent of `var` by `exponent / d`.
    pub fn root_substitute(&self, var: usize, d: u32) -> Result<Self, PolyError> {
        assert!(d > 0, "root index must be positive");
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            if e[var] % d != 0 {
                return Err(PolyError::NotDivisible { var, divisor: d, exponent: e[var] });
            }
            let mut m = e.clone();
            m[var] /= d;
            out.terms.insert(m, a.clone());
        }
        Ok(out)
    }

    /// Reinterprets in `nvars` variables, old variable `i` becoming `positions[i]`.
    pub fn embed(&self, nvars: usize, positions: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(e, a)| {
            let mut m = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                m[positions[i]] += k;
            }
            (m, a.clone())
        });
        Self::from_terms(nvars, terms)
    }

    pub fn w_order(&self, weights: &[i64]) -> Result<i64, PolyError> {
        self.terms.keys().map(|e| w_degree(e, weights)).min().ok_or(PolyError::ZeroPolynomial)
    }

    /// Weighted-homogeneous parts in ascending degree; empty for zero.
    pub fn w_parts(&self, weights: &[i64]) -> Vec<WHomogPiece<K>> {
        let mut by_deg: BTreeMap<i64, Poly<K>> = BTreeMap::new();
        for (e, a) in &self.terms {
            by_deg
                .entry(w_degree(e, weights))
                .or_insert_with(|| Poly::zero(self.nvars))
                .terms
                .insert(e.clone(), a.clone());
        }
        by_deg
            .into_iter()
            .map(|(degree, part)| WHomogPiece { weights: weights.to_vec(), degree, part })
            .collect()
    }

    /// Lowest weighted-homogeneous part.
    pub fn w_initial(&self, weights: &[i64]) -> Result<WHomogPiece<K>, PolyError> {
        self.w_parts(weights).into_iter().next().ok_or(PolyError::ZeroPolynomial)
    }

    /// Homogeneous part of total degree `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == deg);
        Poly { nvars: self.nvars, terms: terms.map(|(e, a)| (e.clone(), a.clone())).collect() }
    }

    /// Strict transform in a chart of the `(p,q)` blow-up of the plane.
    ///
    /// Chart 1 substitutes `(x^p, x^q y)`, chart 2 substitutes `(x y^p, y^q)`; the
    /// exceptional coordinate power `ν` is divided out and returned.
    pub fn strict_transform(&self, (p, q): (u32, u32), chart: u8) -> Result<(i64, Self), PolyError> {
        assert_eq!(self.nvars, 2, "strict_transform acts on plane germs");
        let nu = self.w_order(&[i64::from(p), i64::from(q)])?;
        let (images, var) = match chart {
            1 => (vec![vec![p, 0], vec![q, 1]], 0),
            2 => (vec![vec![1, p], vec![0, q]], 1),
            _ => panic!("chart index must be 1 or 2"),
        };
        let pulled = self.pullback(&images);
        let mut div = vec![0, 0];
        div[var] = u32::try_from(nu).expect("weighted order fits u32");
        let g = pulled.div_monomial(&div).expect("x^nu divides the pull-back");
        Ok((nu, g))
    }

    /// Univariate view, if only `var` occurs.
    pub fn to_univariate(&self, var: usize) -> Option<UPoly<K>>
    where
        K: Field,
    {
        let mut v = vec![K::zero(); self.degree_in(var).unwrap_or(0) as usize + 1];
        for (e, a) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            v[e[var] as usize] = a.clone();
        }
        Some(UPoly::new(v))
    }

    pub fn from_univariate(nvars: usize, var: usize, u: &UPoly<K>) -> Self
    where
        K: Field,
    {
        let terms = u.coeffs().iter().enumerate().map(|(k, c)| {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            (e, c.clone())
        });
        Self::from_terms(nvars, terms)
    }
}

fn pow_scalar<K: Scalar>(c: &K, k: u32) -> K {
    let mut acc = K::one();
    for _ in 0..k {
        acc = acc * c.clone();
    }
    acc
}

impl<K: Scalar> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<K: Scalar> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<K: Scalar> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let m: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<K: Scalar> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<K: Scalar> $tr for Poly<K> {
            type Output = Poly<K>;
            fn $m(self, rhs: Poly<K>) -> Poly<K> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Default printable name of variable `i`.
pub fn var_name(i: usize) -> String {
    match i {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        _ => format!("x{i}"),
    }
}

impl WPoly {
    /// Parses with variables `x, y, z` (as many as `nvars`).
    pub fn parse(src: &str, nvars: usize) -> Result<Self, PolyError> {
        let names: Vec<String> = (0..nvars).map(var_name).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        parse::parse(src, &refs)
    }

    pub fn parse_with(src: &str, names: &[&str]) -> Result<Self, PolyError> {
        parse::parse(src, names)
    }

    /// Renders with the given variable names; the output parses back to `self`.
    pub fn to_string_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        // Descending order reads naturally: highest total degree first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { names[v].to_string() } else { format!("{}^{k}", names[v]) })
                .collect();
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

/// Polynomials serialize as their parseable text form.
impl Serialize for WPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for WPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(var_name).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.to_string_with(&refs))
    }
}

impl<K: fmt::Debug> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Factorization of a `(p,q)`-homogeneous binary form:
/// `part = unit * x^e0 * y^e_inf * prod phi_j(x^q, y^p)^{mult_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WHomogFactors {
    pub weights: (u32, u32),
    pub unit: Rat,
    pub e0: u32,
    pub e_inf: u32,
    /// `(phi_j(X, 1), mult_j)` with `phi_j(X,1)` monic irreducible over the rationals.
    pub factors: Vec<(UPoly<Rat>, u32)>,
}

impl WHomogFactors {
    /// `phi(x^q, y^p)` for a factor `phi(X,1)` of degree `n`, homogenized as `Y^n phi(X/Y)`.
    pub fn factor_form(&self, f: &UPoly<Rat>) -> WPoly {
        let (p, q) = self.weights;
        let n = f.degree().expect("factor is nonconstant") as u32;
        let terms = f.coeffs().iter().enumerate().map(|(a, c)| (vec![q * a as u32, p * (n - a as u32)], c.clone()));
        WPoly::from_terms(2, terms)
    }

    /// Multiplies the factorization back out.
    pub fn expand(&self) -> WPoly {
        let mut acc = WPoly::monomial(vec![self.e0, self.e_inf], self.unit.clone());
        for (f, k) in &self.factors {
            acc = &acc * &self.factor_form(f).pow(*k);
        }
        acc
    }
}

/// Factors a nonzero `(p,q)`-homogeneous binary form over the rationals.
pub fn factor_whomog(piece: &WHomogPiece<Rat>) -> Result<WHomogFactors, PolyError> {
    let h = &piece.part;
    if h.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    assert_eq!(h.nvars, 2, "binary forms only");
    let (p, q) = (piece.weights[0] as u32, piece.weights[1] as u32);
    let content = h.monomial_content();
    let (e0, e_inf) = (content[0], content[1]);
    let reduced = h.div_monomial(&content).expect("content divides");
    // Every monomial is x^{q a} y^{p (D - a)}; collect phi(X,1) = sum c_a X^a.
    let deg = reduced.degree_in(0).unwrap_or(0) / q;
    let mut coeffs = vec![Rat::zero(); deg as usize + 1];
    for (e, c) in reduced.terms() {
        assert!(e[0] % q == 0 && e[1] % p == 0, "piece is not (p,q)-homogeneous");
        coeffs[(e[0] / q) as usize] = c.clone();
    }
    let phi = UPoly::new(coeffs);
    let fac = factor_univariate(&phi);
    Ok(WHomogFactors { weights: (p, q), unit: fac.unit, e0, e_inf, factors: fac.factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};
    use proptest::prelude::*;

    fn wp(s: &str) -> WPoly {
        WPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn w_order_examples() {
        assert_eq!(wp("x^3 + y^2").w_order(&[2, 3]).unwrap(), 6);
        assert_eq!(wp("x^3 + y^2").w_order(&[1, 1]).unwrap(), 2);
        assert_eq!(wp("x^5 + x^2*y^2 + y^6").w_order(&[2, 1]).unwrap(), 6);
        assert_eq!(WPoly::zero(2).w_order(&[1, 1]), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn w_parts_examples() {
        let parts = wp("x^3 + y^2 + x^4").w_parts(&[2, 3]);
        assert_eq!(parts.iter().map(|p| p.degree).collect::<Vec<_>>(), vec![6, 8]);
        assert_eq!(wp("x^3 + y^2").w_parts(&[2, 3]).len(), 1);
        assert!(WPoly::zero(2).w_parts(&[2, 3]).is_empty());
    }

    #[test]
    fn strict_transform_examples() {
        assert_eq!(wp("x^3 + y^2").strict_transform((2, 3), 1).unwrap(), (6, wp("1 + y^2")));
        assert_eq!(wp("x^3 + y^2").strict_transform((2, 3), 2).unwrap(), (6, wp("x^3 + 1")));
        assert_eq!(wp("x").strict_transform((1, 1), 1).unwrap(), (1, wp("1")));
    }

    #[test]
    fn root_substitute_examples() {
        assert_eq!(wp("1 + x^2*y").root_substitute(0, 2).unwrap(), wp("1 + x*y"));
        assert!(matches!(wp("1 + x^3").root_substitute(0, 2), Err(PolyError::NotDivisible { exponent: 3, .. })));
    }

    #[test]
    fn translate_example() {
        assert_eq!(wp("x^2 + y^2").translate_point(&[rat(0), rat(1)]), wp("x^2 + y^2 + 2*y + 1"));
    }

    #[test]
    fn translation_moves_a_tangent_point_to_the_origin() {
        // (y-1)^2 - x^3 has order 0 at the origin and order 2 at (0,1).
        let h = wp("y^2 - 2*y + 1 - x^3");
        assert_eq!(h.order(), Some(0));
        assert_eq!(h.translate_point(&[rat(0), rat(1)]).order(), Some(2));
    }

    #[test]
    fn factor_whomog_examples() {
        let mono = factor_whomog(&wp("x^2*y^3").w_initial(&[1, 1]).unwrap()).unwrap();
        assert_eq!((mono.e0, mono.e_inf, mono.factors.len()), (2, 3, 0));

        let sixth = factor_whomog(&wp("x^6 - y^6").w_initial(&[1, 1]).unwrap()).unwrap();
        let mut degs: Vec<usize> = sixth.factors.iter().map(|(f, _)| f.degree().unwrap()).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 2, 2]);
        assert_eq!(sixth.expand(), wp("x^6 - y^6"));

        // (2,3)-homogeneous piece x^3 + y^2 is itself irreducible.
        let cusp = factor_whomog(&wp("x^3 + y^2").w_initial(&[2, 3]).unwrap()).unwrap();
        assert_eq!(cusp.factors.len(), 1);
        assert_eq!(cusp.expand(), wp("x^3 + y^2"));
    }

    #[test]
    fn display_round_trips() {
        let h = &wp("x^3 - 2/3*x*y + 5") * &wp("y - 1");
        assert_eq!(wp(&h.to_string()), h);
        assert_eq!(wp("-x").to_string(), "-x");
        assert_eq!(WPoly::parse("z^4 + y^2*z - x^3", 3).unwrap().to_string(), "z^4 - x^3 + y^2*z");
        assert_eq!(wp("1/2").constant_term(), ratio(1, 2));
    }

    fn small_poly() -> impl Strategy<Value = WPoly> {
        prop::collection::vec(((0u32..5, 0u32..5), -4i64..5), 1..6).prop_map(|ts| {
            WPoly::from_terms(2, ts.into_iter().map(|((a, b), c)| (vec![a, b], rat(c))))
        })
    }

    proptest! {
        #[test]
        fn w_order_is_additive(h in small_poly(), g in small_poly(), p in 1i64..6, q in 1i64..6) {
            prop_assume!(!h.is_zero() && !g.is_zero());
            let w = [p, q];
            prop_assert_eq!((&h * &g).w_order(&w).unwrap(), h.w_order(&w).unwrap() + g.w_order(&w).unwrap());
        }

        #[test]
        fn strict_transform_round_trips(h in small_poly(), p in 1u32..5, q in 1u32..5) {
            prop_assume!(!h.is_zero());
            let (nu, g) = h.strict_transform((p, q), 1).unwrap();
            let back = g.mul_monomial(&[nu as u32, 0]);
            prop_assert_eq!(back, h.pullback(&[vec![p, 0], vec![q, 1]]));
            prop_assert!(g.min_degree_in(0) == Some(0));
        }

        #[test]
        fn w_parts_sum_to_input(h in small_poly(), p in 1i64..5, q in 1i64..5) {
            let parts = h.w_parts(&[p, q]);
            let sum = parts.iter().fold(WPoly::zero(2), |acc, piece| &acc + &piece.part);
            prop_assert_eq!(sum, h.clone());
            if let Some(first) = parts.first() {
                prop_assert_eq!(first.degree, h.w_order(&[p, q]).unwrap());
            }
        }

        #[test]
        fn factor_whomog_degree_bookkeeping(h in small_poly(), p in 1u32..4, q in 1u32..4) {
            prop_assume!(!h.is_zero() && num_integer::gcd(p, q) == 1);
            let piece = h.w_initial(&[i64::from(p), i64::from(q)]).unwrap();
            let fac = factor_whomog(&piece).unwrap();
            let weighted: i64 = fac.factors.iter()
                .map(|(f, k)| (f.degree().unwrap() as i64) * i64::from(p * q) * i64::from(*k))
                .sum();
            prop_assert_eq!(weighted + i64::from(p * fac.e0 + q * fac.e_inf), piece.degree);
            prop_assert_eq!(fac.expand(), piece.part);
        }

        #[test]
        fn display_parse_round_trip(h in small_poly()) {
            prop_assert_eq!(wp(&h.to_string()), h);
        }
    }
}
