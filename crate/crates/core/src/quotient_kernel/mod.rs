//! Abelian quotient types `X(d; A)` and their weighted blow-up charts.
//!
//! A type with orders `d_0..d_r` and weight rows `a_i` stands for `C^n / G` with
//! `G = mu_{d_0} x ... x mu_{d_r}` acting diagonally: the generator of the `i`-th factor
//! multiplies coordinate `j` by `exp(2 pi i a_ij / d_i)`. Group elements are represented as
//! character vectors in `(Z/D)^n`, `D = lcm(d_i)`, which makes stabilizers and restricted
//! character orders a matter of finite enumeration.

mod blowup;

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wpoly::{Exps, Poly, Scalar};

pub use blowup::{blowup_2d, blowup_3d, Blowup2d, Chart2, Chart3, EquationKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("extended gcd of (0, 0) is undefined")]
    BothZero,
    #[error("invalid quotient type: {0}")]
    Invalid(String),
    #[error("type {0} is not normalized")]
    NotNormalized(String),
    #[error("weights {0:?} are not coprime")]
    WeightsNotCoprime(Vec<i64>),
    #[error("group enumeration exceeded {0} elements")]
    GroupTooLarge(usize),
}

/// Extended Euclid: `(g, u, v)` with `g = gcd(a, b) > 0` and `g = u a + v b`.
pub fn ext_gcd(a: i64, b: i64) -> Result<(i64, i64, i64), QuotientError> {
    if a == 0 && b == 0 {
        return Err(QuotientError::BothZero);
    }
    fn go(a: i64, b: i64) -> (i64, i64, i64) {
        if b == 0 {
            return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
        }
        let (g, x, y) = go(b, a % b);
        (g, y, x - (a / b) * y)
    }
    Ok(go(a, b))
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, u, _) = ext_gcd(a.rem_euclid(m), m).ok()?;
    (g == 1).then(|| u.rem_euclid(m))
}

/// Upper bound on enumerated group sizes.
pub const GROUP_CAP: usize = 1 << 20;

/// A quotient type `X(d; A)` on `C^dim`.
///
/// Invariant: `orders[i] >= 1` and every entry of row `i` lies in `[0, orders[i])`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientType {
    dim: usize,
    orders: Vec<i64>,
    rows: Vec<Vec<i64>>,
}

impl QuotientType {
    /// Builds a type from `(d_i, a_i)` rows; entries are reduced modulo `d_i`.
    pub fn new(dim: usize, rows: Vec<(i64, Vec<i64>)>) -> Result<Self, QuotientError> {
        let mut t = QuotientType { dim, orders: Vec::new(), rows: Vec::new() };
        for (d, row) in rows {
            if d < 1 || row.len() != dim {
                return Err(QuotientError::Invalid(format!("row ({d}; {row:?}) on C^{dim}")));
            }
            t.orders.push(d);
            t.rows.push(row.iter().map(|a| a.rem_euclid(d)).collect());
        }
        Ok(t)
    }

    /// Single-row type `X(d; weights)`.
    pub fn cyclic(d: i64, weights: &[i64]) -> Self {
        Self::new(weights.len(), vec![(d, weights.to_vec())]).expect("valid cyclic type")
    }

    /// The smooth chart `C^dim`.
    pub fn trivial(dim: usize) -> Self {
        QuotientType { dim, orders: Vec::new(), rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn rows(&self) -> impl Iterator<Item = (i64, &[i64])> {
        self.orders.iter().copied().zip(self.rows.iter().map(Vec::as_slice))
    }

    pub fn num_rows(&self) -> usize {
        self.orders.len()
    }

    /// Appends a row.
    pub fn with_row(&self, d: i64, row: &[i64]) -> Self {
        let mut rows: Vec<(i64, Vec<i64>)> = self.rows().map(|(d, r)| (d, r.to_vec())).collect();
        rows.push((d, row.to_vec()));
        Self::new(self.dim, rows).expect("row of matching dimension")
    }

    /// True if the group acts trivially.
    pub fn is_trivial(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|&a| a == 0))
    }

    /// `D = lcm(d_i)`, the exponent in which characters are written.
    pub fn exponent(&self) -> i64 {
        self.orders.iter().fold(1, |acc, &d| acc.lcm(&d))
    }

    /// Row-wise residues `A e mod d` of a monomial.
    pub fn character(&self, exps: &[u32]) -> Vec<i64> {
        self.rows()
            .map(|(d, row)| row.iter().zip(exps).map(|(a, &e)| a * i64::from(e)).sum::<i64>().rem_euclid(d))
            .collect()
    }

    pub fn monomial_is_invariant(&self, exps: &[u32]) -> bool {
        self.character(exps).iter().all(|&c| c == 0)
    }

    /// True iff every monomial of `poly` is invariant, so `poly` is a function on the quotient.
    pub fn is_function<K: Scalar>(&self, poly: &Poly<K>) -> bool {
        poly.terms().all(|(e, _)| self.monomial_is_invariant(e))
    }

    /// True iff all monomials of `poly` carry the same character, so its zero set descends.
    pub fn is_zero_set<K: Scalar>(&self, poly: &Poly<K>) -> bool {
        let mut chars = poly.terms().map(|(e, _)| self.character(e));
        let Some(first) = chars.next() else { return true };
        chars.all(|c| c == first)
    }

    /// Canonical presentation of the same orbit space: rows divided by `gcd(d, row)`,
    /// scaled so the first unit entry is 1, trivial and repeated rows removed.
    pub fn simplify(&self) -> Self {
        let mut rows: Vec<(i64, Vec<i64>)> = Vec::new();
        for (d, row) in self.rows() {
            let g = row.iter().fold(d, |acc, &a| acc.gcd(&a));
            let d2 = d / g;
            if d2 == 1 {
                continue;
            }
            let mut r: Vec<i64> = row.iter().map(|a| a / g).collect();
            if let Some(&u) = r.iter().find(|&&a| a.gcd(&d2) == 1) {
                let inv = mod_inverse(u, d2).expect("unit");
                for a in &mut r {
                    *a = (*a * inv).rem_euclid(d2);
                }
            }
            if !rows.iter().any(|(e, s)| *e == d2 && *s == r) {
                rows.push((d2, r));
            }
        }
        Self::new(self.dim, rows).expect("simplified rows stay valid")
    }

    /// For a cyclic plane type: free on the torus and without pseudo-reflections.
    pub fn is_normalized_2d(&self) -> bool {
        let s = self.simplify();
        if s.dim != 2 || s.num_rows() > 1 {
            return false;
        }
        let ok = s.rows().all(|(d, r)| r[0].gcd(&d) == 1 && r[1].gcd(&d) == 1);
        ok
    }

    /// Character vectors in `(Z/D)^dim` of all group elements (the image of `G`).
    pub fn elements(&self) -> Result<Vec<Vec<i64>>, QuotientError> {
        let big = self.exponent();
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        set.insert(vec![0; self.dim]);
        for (d, row) in self.rows() {
            let gen: Vec<i64> = row.iter().map(|a| a * (big / d) % big).collect();
            let mut next = BTreeSet::new();
            for s in &set {
                let mut cur = s.clone();
                for _ in 0..d {
                    next.insert(cur.clone());
                    for (c, g) in cur.iter_mut().zip(&gen) {
                        *c = (*c + g) % big;
                    }
                }
                if next.len() > GROUP_CAP {
                    return Err(QuotientError::GroupTooLarge(GROUP_CAP));
                }
            }
            set = next;
        }
        Ok(set.into_iter().collect())
    }

    /// Order of the acting group (image in `GL_n`).
    pub fn group_order(&self) -> Result<usize, QuotientError> {
        Ok(self.elements()?.len())
    }

    /// Elements fixing a generic point whose nonzero coordinates are those with `support[j]`.
    pub fn stabilizer(&self, support: &[bool]) -> Result<Vec<Vec<i64>>, QuotientError> {
        Ok(self
            .elements()?
            .into_iter()
            .filter(|g| g.iter().zip(support).all(|(&c, &nz)| !nz || c == 0))
            .collect())
    }

    pub fn stabilizer_order(&self, support: &[bool]) -> Result<usize, QuotientError> {
        Ok(self.stabilizer(support)?.len())
    }

    /// `L = lcm(d_i / gcd(d_i, a_{i,idx}))`: the order of the character on coordinate `idx`.
    pub fn multiplicity_l(&self, idx: usize) -> i64 {
        self.rows().map(|(d, row)| d / d.gcd(&row[idx])).fold(1, |acc, v| acc.lcm(&v))
    }

    /// The stratum multiplicity divisor: order of the character of coordinate `idx`
    /// restricted to the stabilizer of the stratum given by `support`.
    pub fn stratum_l(&self, support: &[bool], idx: usize) -> Result<i64, QuotientError> {
        let big = self.exponent();
        let stab = self.stabilizer(support)?;
        Ok(char_order(&stab, idx, big))
    }

    /// The type acting through the subgroup of `elements`, rebuilt from a greedy generating set.
    pub fn from_elements(dim: usize, big: i64, elements: &[Vec<i64>]) -> Self {
        let mut rows = Vec::new();
        let mut generated: BTreeSet<Vec<i64>> = BTreeSet::new();
        generated.insert(vec![0; dim]);
        // Prefer high-order generators so the presentation stays short.
        let mut sorted: Vec<&Vec<i64>> = elements.iter().collect();
        sorted.sort_by_key(|g| std::cmp::Reverse(element_order(g, big)));
        for g in sorted {
            if generated.contains(g) {
                continue;
            }
            let o = element_order(g, big);
            rows.push((o, g.iter().map(|c| c / (big / o)).collect::<Vec<i64>>()));
            let mut next = BTreeSet::new();
            for s in &generated {
                let mut cur = s.clone();
                for _ in 0..o {
                    next.insert(cur.clone());
                    for (c, x) in cur.iter_mut().zip(g) {
                        *c = (*c + x) % big;
                    }
                }
            }
            generated = next;
        }
        Self::new(dim, rows).expect("rows built from elements")
    }

    /// Exponent vectors of invariant monomials of total degree at most `bound`.
    pub fn invariant_exponents(&self, bound: u32) -> BTreeSet<Exps> {
        let mut out = BTreeSet::new();
        let mut e = vec![0u32; self.dim];
        fn rec(t: &QuotientType, e: &mut Exps, i: usize, left: u32, out: &mut BTreeSet<Exps>) {
            if i == e.len() {
                if t.monomial_is_invariant(e) {
                    out.insert(e.clone());
                }
                return;
            }
            for k in 0..=left {
                e[i] = k;
                rec(t, e, i + 1, left - k, out);
            }
            e[i] = 0;
        }
        rec(self, &mut e, 0, bound, &mut out);
        out
    }
}

/// Order of `g` in `(Z/D)^n`.
pub fn element_order(g: &[i64], big: i64) -> i64 {
    g.iter().fold(1, |acc, &c| acc.lcm(&(big / big.gcd(&c))))
}

/// Order of the subgroup `{g[idx]}` of `Z/D` spanned by a set of elements.
pub fn char_order(elements: &[Vec<i64>], idx: usize, big: i64) -> i64 {
    let g = elements.iter().fold(big, |acc, e| acc.gcd(&e[idx]));
    big / g
}

impl fmt::Display for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "C^{}", self.dim);
        }
        let rows: Vec<String> = self
            .rows()
            .map(|(d, r)| format!("{d}; {}", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "X({})", rows.join(" | "))
    }
}

impl fmt::Debug for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Free-function form of [`QuotientType::simplify`].
pub fn simplify_type(t: &QuotientType) -> QuotientType {
    t.simplify()
}

/// Free-function form of [`QuotientType::is_function`].
pub fn is_function<K: Scalar>(t: &QuotientType, poly: &Poly<K>) -> bool {
    t.is_function(poly)
}

/// Free-function form of [`QuotientType::stabilizer_order`].
pub fn stabilizer_order(t: &QuotientType, support: &[bool]) -> Result<usize, QuotientError> {
    t.stabilizer_order(support)
}

/// Free-function form of [`QuotientType::multiplicity_l`].
pub fn multiplicity_l(t: &QuotientType, idx: usize) -> i64 {
    t.multiplicity_l(idx)
}

/// A monomial map: target coordinate `i` equals the source monomial with exponents `images[i]`.
///
/// Pulling back a target polynomial substitutes these monomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialMap {
    pub source: QuotientType,
    pub target: QuotientType,
    pub images: Vec<Exps>,
}

impl MonomialMap {
    pub fn identity(t: &QuotientType) -> Self {
        let images = (0..t.dim()).map(|i| (0..t.dim()).map(|j| u32::from(i == j)).collect()).collect();
        MonomialMap { source: t.clone(), target: t.clone(), images }
    }

    /// Source exponents of the pull-back of the target monomial `exps`.
    pub fn pull_exps(&self, exps: &[u32]) -> Exps {
        let mut out = vec![0u32; self.source.dim()];
        for (e, img) in exps.iter().zip(&self.images) {
            for (o, i) in out.iter_mut().zip(img) {
                *o += e * i;
            }
        }
        out
    }

    pub fn pull<K: Scalar>(&self, poly: &Poly<K>) -> Poly<K> {
        poly.pullback(&self.images)
    }
}

/// Normalizes a cyclic plane type by quotienting out pseudo-reflections.
///
/// The returned map expresses the normalized coordinates as monomials in the original ones.
pub fn normalize_2d(t: &QuotientType) -> Result<(QuotientType, MonomialMap), QuotientError> {
    let s = t.simplify();
    if s.dim() != 2 || s.num_rows() > 1 {
        return Err(QuotientError::Invalid(format!("{t} is not a cyclic plane type")));
    }
    let mut images: Vec<Exps> = vec![vec![1, 0], vec![0, 1]];
    let mut cur = s.clone();
    loop {
        let Some((d, row)) = cur.rows().next().map(|(d, r)| (d, r.to_vec())) else { break };
        let (a, b) = (row[0], row[1]);
        let g1 = d.gcd(&a);
        let g2 = d.gcd(&b);
        if g1 > 1 {
            // The subgroup of order g1 fixes x: pass to y^{g1}.
            cur = QuotientType::cyclic(d / g1, &[a / g1, b]).simplify();
            for v in &mut images[1] {
                *v *= g1 as u32;
            }
        } else if g2 > 1 {
            cur = QuotientType::cyclic(d / g2, &[a, b / g2]).simplify();
            for v in &mut images[0] {
                *v *= g2 as u32;
            }
        } else {
            break;
        }
    }
    let map = MonomialMap { source: s, target: cur.clone(), images };
    Ok((cur, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::WPoly;
    use proptest::prelude::*;

    fn x(d: i64, w: &[i64]) -> QuotientType {
        QuotientType::cyclic(d, w)
    }

    #[test]
    fn ext_gcd_examples() {
        assert_eq!(ext_gcd(2, 3), Ok((1, -1, 1)));
        assert_eq!(ext_gcd(4, 6), Ok((2, -1, 1)));
        assert_eq!(ext_gcd(7, 0), Ok((7, 1, 0)));
        assert_eq!(ext_gcd(0, 0), Err(QuotientError::BothZero));
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(x(1, &[0, 0]).simplify(), QuotientType::trivial(2));
        assert_eq!(x(2, &[-1, 3]).simplify(), x(2, &[1, 1]));
        // Scaling X(5;2,1) by the unit 3 gives X(5;1,3); both present the same group.
        assert_eq!(x(5, &[2, 1]).simplify(), x(5, &[1, 3]));
        assert_eq!(x(5, &[2, 1]).invariant_exponents(12), x(5, &[1, 3]).invariant_exponents(12));
    }

    #[test]
    fn is_function_examples() {
        let t = x(2, &[-1, 3]);
        let p = |s: &str| WPoly::parse(s, 2).unwrap();
        assert!(t.is_function(&p("x^6")));
        assert!(!t.is_function(&p("x^5")));
        assert!(t.is_function(&p("1 + y^2")));
    }

    fn lattice_matches(src: &QuotientType, map: &MonomialMap, target: &QuotientType, bound: u32) -> bool {
        let lhs = src.invariant_exponents(bound);
        let rhs: BTreeSet<Exps> = target
            .invariant_exponents(bound)
            .iter()
            .map(|e| map.pull_exps(e))
            .filter(|e| e.iter().sum::<u32>() <= bound)
            .collect();
        lhs == rhs
    }

    #[test]
    fn normalize_examples() {
        let (t, m) = normalize_2d(&x(2, &[1, 1])).unwrap();
        assert_eq!(t, x(2, &[1, 1]));
        assert_eq!(m.images, vec![vec![1, 0], vec![0, 1]]);

        let (t, m) = normalize_2d(&x(4, &[2, 1])).unwrap();
        assert_eq!(t, x(2, &[1, 1]));
        assert_eq!(m.images, vec![vec![1, 0], vec![0, 2]]);

        let src = x(6, &[2, 3]);
        let (t, m) = normalize_2d(&src).unwrap();
        assert!(t.is_normalized_2d() || t.is_trivial());
        assert!(lattice_matches(&src.simplify(), &m, &t, 12));
    }

    #[test]
    fn stabilizers_and_l() {
        assert_eq!(x(2, &[-1, 3]).stabilizer_order(&[false, true]), Ok(1));
        assert_eq!(QuotientType::trivial(3).stabilizer_order(&[false, true, false]), Ok(1));
        // A generic point of the line {x = 0} in the third chart X(r; p, q, -1) of a
        // (p,q,r) blow-up is fixed by a cyclic group of order gcd(q, r).
        for (p, q, r) in [(2, 3, 6), (1, 4, 6), (3, 4, 10), (5, 6, 9)] {
            let t = x(r, &[p, q, -1]);
            assert_eq!(t.stabilizer_order(&[false, true, false]).unwrap() as i64, q.gcd(&r));
        }
        assert_eq!(x(2, &[-1, 3]).multiplicity_l(0), 2);
        assert_eq!(x(3, &[2, -1]).multiplicity_l(1), 3);
        assert_eq!(QuotientType::trivial(2).multiplicity_l(0), 1);
    }

    #[test]
    fn from_elements_round_trips() {
        let t = QuotientType::new(3, vec![(4, vec![1, 2, 3]), (6, vec![0, 1, 5])]).unwrap();
        let big = t.exponent();
        let elems = t.elements().unwrap();
        let rebuilt = QuotientType::from_elements(3, big, &elems);
        assert_eq!(rebuilt.invariant_exponents(10), t.invariant_exponents(10));
    }

    proptest! {
        #[test]
        fn simplify_preserves_invariants(d in 1i64..13, a in -12i64..13, b in -12i64..13) {
            let t = x(d, &[a, b]);
            prop_assert_eq!(t.simplify().invariant_exponents(14), t.invariant_exponents(14));
        }

        #[test]
        fn normalize_preserves_invariant_lattice(d in 1i64..13, a in 0i64..12, b in 0i64..12) {
            prop_assume!(d.gcd(&a).gcd(&b) == 1);
            let src = x(d, &[a, b]);
            let (t, m) = normalize_2d(&src).unwrap();
            prop_assert!(t.is_trivial() || t.is_normalized_2d());
            prop_assert!(lattice_matches(&src.simplify(), &m, &t, 14));
        }

        #[test]
        fn group_order_matches_invariant_density(d in 1i64..9, e in 1i64..9, a in 0i64..9, b in 0i64..9) {
            let t = QuotientType::new(2, vec![(d, vec![a, 1]), (e, vec![1, b])]).unwrap();
            let elems = t.elements().unwrap();
            let big = t.exponent();
            let rebuilt = QuotientType::from_elements(2, big, &elems);
            prop_assert_eq!(rebuilt.elements().unwrap().len(), elems.len());
            prop_assert_eq!(rebuilt.invariant_exponents(12), t.invariant_exponents(12));
        }
    }
}
