//! Formal products of cyclotomic binomials `prod (t^m - 1)^a`.
//!
//! [`CharProduct`] is the system of record for characteristic polynomials: exponent
//! arithmetic is exact and cheap, and [`CyclotomicVector`] gives a canonical form for
//! equality across independent computations. Expansion into coefficients happens last.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("product is not a polynomial: cyclotomic exponent {exponent} at order {order}")]
    NotPolynomial { order: u64, exponent: i64 },
}

/// `prod (t^m - 1)^{a_m}`; no zero exponents stored, orders are at least 1.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CharProduct(BTreeMap<u64, i64>);

impl CharProduct {
    /// The empty product.
    pub fn one() -> Self {
        Self::default()
    }

    /// `(t^m - 1)^a`.
    pub fn factor(m: u64, a: i64) -> Self {
        Self::from_pairs([(m, a)])
    }

    /// Product of `(t^m - 1)^a` over the pairs; repeated orders merge.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut out = Self::one();
        for (m, a) in pairs {
            out.push(m, a);
        }
        out
    }

    fn push(&mut self, m: u64, a: i64) {
        assert!(m >= 1, "binomial order must be positive");
        if a == 0 {
            return;
        }
        let e = self.0.entry(m).or_insert(0);
        *e += a;
        if *e == 0 {
            self.0.remove(&m);
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// `(order, exponent)` pairs in ascending order.
    pub fn factors(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter().map(|(&m, &a)| (m, a))
    }

    pub fn exponent(&self, m: u64) -> i64 {
        self.0.get(&m).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, a) in other.factors() {
            out.push(m, a);
        }
        out
    }

    /// Raises to an integer power (scales every exponent).
    pub fn pow(&self, k: i64) -> Self {
        Self::from_pairs(self.factors().map(|(m, a)| (m, a * k)))
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// Degree of the rational function: `sum m a`.
    pub fn degree(&self) -> i64 {
        self.factors().map(|(m, a)| m as i64 * a).sum()
    }

    /// `t -> t^s`.
    pub fn substitute_power(&self, s: u64) -> Self {
        assert!(s >= 1);
        Self::from_pairs(self.factors().map(|(m, a)| (m * s, a)))
    }

    /// The operator `(t^m - 1)^a -> (t^{m/g} - 1)^{g a}` with `g = gcd(m, k)`.
    pub fn delta_k(&self, k: u64) -> Self {
        assert!(k >= 1);
        Self::from_pairs(self.factors().map(|(m, a)| {
            let g = m.gcd(&k);
            (m / g, g as i64 * a)
        }))
    }

    /// Canonical form via `t^m - 1 = prod_{d | m} Phi_d`.
    pub fn to_cyclotomic(&self) -> CyclotomicVector {
        let mut c: BTreeMap<u64, i64> = BTreeMap::new();
        for (m, a) in self.factors() {
            for d in divisors(m) {
                *c.entry(d).or_insert(0) += a;
            }
        }
        c.retain(|_, v| *v != 0);
        CyclotomicVector(c)
    }

    /// Integer coefficients in ascending degree; errors unless the product is a polynomial.
    pub fn expand(&self) -> Result<Vec<BigInt>, MonodromyError> {
        self.to_cyclotomic().check_polynomial()?;
        let mut poly = vec![BigInt::one()];
        for (m, a) in self.factors().filter(|&(_, a)| a > 0) {
            for _ in 0..a {
                poly = mul_binomial(&poly, m as usize);
            }
        }
        for (m, a) in self.factors().filter(|&(_, a)| a < 0) {
            for _ in 0..-a {
                poly = div_binomial(&poly, m as usize).expect("cyclotomic exponents are nonnegative");
            }
        }
        Ok(poly)
    }
}

/// `p (t^m - 1)`.
fn mul_binomial(p: &[BigInt], m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + m];
    for (i, c) in p.iter().enumerate() {
        out[i + m] += c;
        out[i] -= c;
    }
    out
}

/// Exact quotient `p / (t^m - 1)`, if it divides.
fn div_binomial(p: &[BigInt], m: usize) -> Option<Vec<BigInt>> {
    if p.len() <= m {
        return None;
    }
    let mut q = vec![BigInt::zero(); p.len() - m];
    // p = q t^m - q: top-down, q[i-m] = p[i] + q[i].
    for i in (m..p.len()).rev() {
        let upper = q.get(i).cloned().unwrap_or_default();
        q[i - m] = &p[i] + upper;
    }
    (0..m).all(|i| p[i] == -q.get(i).cloned().unwrap_or_default()).then_some(q)
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

impl fmt::Display for CharProduct {
    /// Renders as `(t^m-1)^e` factors, highest order first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(&m, &a)| {
                let base = if m == 1 { "(t-1)".to_string() } else { format!("(t^{m}-1)") };
                if a == 1 {
                    base
                } else {
                    format!("{base}^{a}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl fmt::Debug for CharProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `prod Phi_d^{c_d}`; no zero exponents stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CyclotomicVector(BTreeMap<u64, i64>);

impl CyclotomicVector {
    pub fn exponent(&self, d: u64) -> i64 {
        self.0.get(&d).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.0.iter().map(|(&d, &c)| (d, c))
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.values().all(|&c| c >= 0)
    }

    fn check_polynomial(&self) -> Result<(), MonodromyError> {
        match self.0.iter().find(|(_, &c)| c < 0) {
            Some((&order, &exponent)) => Err(MonodromyError::NotPolynomial { order, exponent }),
            None => Ok(()),
        }
    }

    /// `sum c_d phi(d)`.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(&d, &c)| c * totient(d) as i64).sum()
    }
}

/// Characteristic polynomial from strata `(m, chi)` of an embedded resolution of a
/// hypersurface in `C^{n+1}`: `[ (t-1)^{-1} prod (t^m - 1)^chi ]^{(-1)^n}`.
///
/// An empty stratum list stands for a smooth germ (no exceptional divisor), whose
/// characteristic polynomial is 1. Resolutions with divisors must pass their strata even
/// when the Euler characteristics vanish.
pub fn acampo(strata: &[(u64, i64)], n: u32) -> CharProduct {
    if strata.is_empty() {
        return CharProduct::one();
    }
    let inner = CharProduct::factor(1, -1).mul(&CharProduct::from_pairs(strata.iter().copied()));
    if n.is_multiple_of(2) {
        inner
    } else {
        inner.inverse()
    }
}

/// Milnor number from strata: `(-1)^n [ -1 + sum m chi ]`.
pub fn milnor_from_strata(strata: &[(u64, i64)], n: u32) -> i64 {
    if strata.is_empty() {
        return 0;
    }
    let s: i64 = -1 + strata.iter().map(|&(m, chi)| m as i64 * chi).sum::<i64>();
    if n.is_multiple_of(2) {
        s
    } else {
        -s
    }
}

/// Milnor number as the degree of a genuine characteristic polynomial.
pub fn milnor(cp: &CharProduct) -> Result<i64, MonodromyError> {
    let cyc = cp.to_cyclotomic();
    cyc.check_polynomial()?;
    debug_assert_eq!(cyc.degree(), cp.degree());
    Ok(cp.degree())
}

/// Superisolated closed form: `(t^m - 1)^chi / (t - 1) * prod Delta_P(t^{m+1})`.
pub fn closed_sis(chi_complement: i64, m: u64, deltas: &[CharProduct]) -> CharProduct {
    closed_yls(chi_complement, m, 1, deltas)
}

/// Yomdin-Le closed form: `(t^m - 1)^chi / (t - 1) * prod Delta_P^k(t^{m+k})`.
pub fn closed_yls(chi_complement: i64, m: u64, k: u64, deltas: &[CharProduct]) -> CharProduct {
    let mut out = CharProduct::from_pairs([(m, chi_complement), (1, -1)]);
    for d in deltas {
        out = out.mul(&d.delta_k(k).substitute_power(m + k));
    }
    out
}
