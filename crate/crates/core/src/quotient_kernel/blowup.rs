//! Weighted blow-up charts at the origin of plane and space quotient types.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{mod_inverse, MonomialMap, QuotientError, QuotientType};
use crate::wpoly::Exps;
use crate::WPoly;

/// Whether a divisor equation is an invariant function or only an equivariant zero set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquationKind {
    Function,
    ZeroSet,
}

/// One chart of a plane weighted blow-up.
///
/// The raw chart has coordinates `(X, V)` (chart 1) mapping to the base by `(X^p, X^q V)`
/// under a two-row type; the normalized chart uses `u = X^e` on the exceptional coordinate,
/// so equations pass from raw to normalized coordinates by a root substitution of order `e`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chart2 {
    pub index: u8,
    /// Chart type in normalized coordinates.
    pub quotient: QuotientType,
    /// Raw chart type before extracting the `e`-th root.
    pub raw: QuotientType,
    /// Raw coordinates to base coordinates.
    pub gluing: MonomialMap,
    /// Exponent extracted on the exceptional coordinate.
    pub root: u32,
    /// Coordinate index of the exceptional divisor (0 in chart 1, 1 in chart 2).
    pub exceptional_var: usize,
    pub divisor_equations: BTreeMap<String, (WPoly, EquationKind)>,
}

/// The `(p,q)` blow-up at the origin of a cyclic plane type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Blowup2d {
    pub base: QuotientType,
    pub weights: (i64, i64),
    /// `e = gcd(d, pb - qa)`.
    pub e: i64,
    pub charts: [Chart2; 2],
}

/// Plane `(p,q)` blow-up of a normalized cyclic type.
pub fn blowup_2d(t: &QuotientType, (p, q): (i64, i64)) -> Result<Blowup2d, QuotientError> {
    if p < 1 || q < 1 || p.gcd(&q) != 1 {
        return Err(QuotientError::WeightsNotCoprime(vec![p, q]));
    }
    let s = t.simplify();
    if s.dim() != 2 || !(s.is_trivial() || s.is_normalized_2d()) {
        return Err(QuotientError::NotNormalized(t.to_string()));
    }
    let (d, a, b) = match s.rows().next() {
        Some((d, r)) => (d, r[0], r[1]),
        None => (1, 0, 0),
    };
    let e = d.gcd(&(p * b - q * a));
    let beta = mod_inverse(a, d).expect("normalized type has unit weights");
    let mu = mod_inverse(b, d).expect("normalized type has unit weights");
    let c1 = -q + beta * p * b;
    let c2 = -p + mu * q * a;
    debug_assert!(c1 % e == 0 && c2 % e == 0);
    let formula = [
        QuotientType::cyclic(p * d / e, &[1, c1 / e]).simplify(),
        QuotientType::cyclic(q * d / e, &[c2 / e, 1]).simplify(),
    ];
    let raw = [
        QuotientType::new(2, vec![(p, vec![-1, q]), (p * d, vec![a, p * b - q * a])])?,
        QuotientType::new(2, vec![(q, vec![p, -1]), (q * d, vec![q * a - p * b, b])])?,
    ];
    let (pu, qu) = (p as u32, q as u32);
    let images: [Vec<Exps>; 2] = [vec![vec![pu, 0], vec![qu, 1]], vec![vec![1, pu], vec![0, qu]]];
    let charts = [0usize, 1].map(|i| {
        let var = i;
        let eq = WPoly::var(2, var);
        let kind =
            if formula[i].is_function(&eq) { EquationKind::Function } else { EquationKind::ZeroSet };
        Chart2 {
            index: i as u8 + 1,
            quotient: formula[i].clone(),
            raw: raw[i].clone(),
            gluing: MonomialMap { source: raw[i].clone(), target: s.clone(), images: images[i].clone() },
            root: e as u32,
            exceptional_var: var,
            divisor_equations: BTreeMap::from([("E".to_string(), (eq, kind))]),
        }
    });
    Ok(Blowup2d { base: s, weights: (p, q), e, charts })
}

/// One chart of a space weighted blow-up, kept in its raw multi-row presentation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chart3 {
    pub index: u8,
    pub quotient: QuotientType,
    pub gluing: MonomialMap,
    pub exceptional_var: usize,
}

/// Space `(p,q,r)` blow-up at the origin of a (possibly multi-row) type.
///
/// Chart `i` carries the row `(w_i; w with -1 at i)` followed, for each base row
/// `(d; a)`, by the row `(w_i d; w_i a - a_i w)` with `a_i` in position `i`.
pub fn blowup_3d(t: &QuotientType, w: (i64, i64, i64)) -> Result<[Chart3; 3], QuotientError> {
    let w = [w.0, w.1, w.2];
    if w.iter().any(|&x| x < 1) {
        return Err(QuotientError::WeightsNotCoprime(w.to_vec()));
    }
    if t.dim() != 3 {
        return Err(QuotientError::Invalid(format!("{t} is not a space type")));
    }
    let charts = [0usize, 1, 2].map(|i| {
        let mut first = w.to_vec();
        first[i] = -1;
        let mut rows = vec![(w[i], first)];
        for (d, a) in t.rows() {
            let row: Vec<i64> = (0..3).map(|j| if j == i { a[i] } else { w[i] * a[j] - w[j] * a[i] }).collect();
            rows.push((w[i] * d, row));
        }
        let quotient = QuotientType::new(3, rows).expect("rows of length 3");
        let images: Vec<Exps> = (0..3)
            .map(|j| {
                let mut v = vec![0u32; 3];
                v[i] = w[j] as u32;
                if j != i {
                    v[j] = 1;
                }
                v
            })
            .collect();
        Chart3 {
            index: i as u8 + 1,
            gluing: MonomialMap { source: quotient.clone(), target: t.clone(), images },
            quotient,
            exceptional_var: i,
        }
    });
    Ok(charts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    /// The orbit spaces agree after `X = u^e` on coordinate `var`: raw invariants are exactly
    /// `u`-invariants with the `var` exponent multiplied by `e`.
    fn same_after_root(formula: &QuotientType, raw: &QuotientType, var: usize, e: u32, bound: u32) -> bool {
        let f = formula.invariant_exponents(bound);
        let raw_inv = raw.invariant_exponents(bound * e);
        if raw_inv.iter().any(|r| r[var] % e != 0) {
            return false;
        }
        let r: BTreeSet<Exps> = raw_inv
            .into_iter()
            .map(|mut r| {
                r[var] /= e;
                r
            })
            .filter(|r| r.iter().sum::<u32>() <= bound)
            .collect();
        f == r
    }

    #[test]
    fn smooth_cusp_weights() {
        let b = blowup_2d(&QuotientType::trivial(2), (2, 3)).unwrap();
        assert_eq!(b.e, 1);
        assert_eq!(b.charts[0].quotient, QuotientType::cyclic(2, &[-1, 3]).simplify());
        assert_eq!(b.charts[1].quotient, QuotientType::cyclic(3, &[2, -1]).simplify());
    }

    #[test]
    fn singular_base_chart_types() {
        let b = blowup_2d(&QuotientType::cyclic(2, &[1, 1]), (2, 3)).unwrap();
        assert_eq!(b.e, 1);
        assert_eq!(b.charts[0].quotient, QuotientType::cyclic(4, &[1, 3]).simplify());
        assert_eq!(b.charts[1].quotient, QuotientType::cyclic(6, &[1, 1]).simplify());
    }

    #[test]
    fn classical_blowup_is_smooth() {
        let b = blowup_2d(&QuotientType::trivial(2), (1, 1)).unwrap();
        assert!(b.charts.iter().all(|c| c.quotient.is_trivial()));
        let c = blowup_3d(&QuotientType::trivial(3), (1, 1, 1)).unwrap();
        assert!(c.iter().all(|c| c.quotient.simplify().is_trivial()));
    }

    #[test]
    fn rejects_non_normalized_base() {
        assert!(matches!(
            blowup_2d(&QuotientType::cyclic(4, &[2, 1]), (1, 1)),
            Err(QuotientError::NotNormalized(_))
        ));
        assert!(blowup_2d(&QuotientType::trivial(2), (2, 4)).is_err());
    }

    #[test]
    fn smooth_space_charts() {
        let c = blowup_3d(&QuotientType::trivial(3), (2, 3, 6)).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].quotient, QuotientType::cyclic(2, &[-1, 3, 6]));
        assert_eq!(c[1].quotient, QuotientType::cyclic(3, &[2, -1, 6]));
        assert_eq!(c[2].quotient, QuotientType::cyclic(6, &[2, 3, -1]));
        assert_eq!(c[0].gluing.images, vec![vec![2, 0, 0], vec![3, 1, 0], vec![6, 0, 1]]);
    }

    #[test]
    fn second_step_space_chart_matches_table() {
        // Base X(p1; -1, q1, nu1) blown up with (pa, qa, nua) at its origin.
        for (p1, q1, nu1, pa, qa) in [(2, 3, 6, 1, 1), (3, 2, 6, 2, 1), (4, 1, 4, 1, 2), (6, 1, 6, 5, 1)] {
            let d = p1.gcd(&(qa + pa * q1));
            // Choose nua with d | nua + pa nu1 so the multiplicity is integral.
            let nua = (d - (pa * nu1) % d) % d + d;
            let ma = (nua + pa * nu1) / d;
            let base = QuotientType::cyclic(p1, &[-1, q1, nu1]);
            let charts = blowup_3d(&base, (pa, qa, nua)).unwrap();
            let formula = QuotientType::cyclic(p1 * pa / d, &[-1, (qa + pa * q1) / d, ma]);
            assert!(same_after_root(&formula, &charts[0].quotient, 0, d as u32, 7), "{p1} {q1} {nu1} {pa} {qa}");
        }
    }

    fn normalized_plane_type() -> impl Strategy<Value = QuotientType> {
        (1i64..13, 0i64..12, 0i64..12).prop_filter_map("normalized", |(d, a, b)| {
            let t = QuotientType::cyclic(d, &[a, b]);
            (d == 1 || (a.gcd(&d) == 1 && b.gcd(&d) == 1)).then_some(t)
        })
    }

    fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
        (1i64..10, 1i64..10).prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
    }

    proptest! {
        #[test]
        fn formula_chart_equals_raw_chart(t in normalized_plane_type(), w in coprime_pair()) {
            let b = blowup_2d(&t, w).unwrap();
            prop_assert_eq!(b.charts.len(), 2);
            let d = b.base.orders().first().copied().unwrap_or(1);
            let (p, q) = w;
            let (a, bb) = b.base.rows().next().map_or((0, 0), |(_, r)| (r[0], r[1]));
            prop_assert_eq!(b.e, d.gcd(&(p * bb - q * a)));
            prop_assert_eq!(d % b.e, 0);
            for (i, c) in b.charts.iter().enumerate() {
                prop_assert!(same_after_root(&c.quotient, &c.raw, i, b.e as u32, 8));
                prop_assert!(c.quotient.is_trivial() || c.quotient.is_normalized_2d());
                prop_assert_eq!(c.exceptional_var, i);
            }
        }

        #[test]
        fn pulled_back_functions_stay_functions(t in normalized_plane_type(), w in coprime_pair()) {
            let b = blowup_2d(&t, w).unwrap();
            for e in b.base.invariant_exponents(8) {
                for c in &b.charts {
                    prop_assert!(c.raw.monomial_is_invariant(&c.gluing.pull_exps(&e)));
                }
            }
        }

        #[test]
        fn space_charts_pull_back_functions(d in 1i64..7, a in 0i64..7, bb in 0i64..7, cc in 0i64..7,
                                            p in 1i64..6, q in 1i64..6, r in 1i64..6) {
            let t = QuotientType::cyclic(d, &[a, bb, cc]);
            let charts = blowup_3d(&t, (p, q, r)).unwrap();
            prop_assert_eq!(charts.len(), 3);
            for e in t.invariant_exponents(6) {
                for c in &charts {
                    prop_assert!(c.quotient.monomial_is_invariant(&c.gluing.pull_exps(&e)));
                }
            }
        }
    }
}
