//! Rational intersection numbers on surfaces with cyclic quotient singularities.
//!
//! Smooth local numbers come from the order of a resultant after a shear that isolates the
//! origin on its vertical line; quotient local numbers divide by the group order of the
//! covering chart.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::quotient_kernel::{Blowup2d, QuotientError, QuotientType};
use crate::wpoly::{PolyError, UPoly};
use crate::{ratio, Rat, WPoly};

/// Largest shear parameter tried before giving up on isolating the origin.
const MAX_SHEAR: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error("the curves share a component through the point")]
    CommonComponent,
    #[error("intersection points escape to infinity along the line; swap charts")]
    NotProper,
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Coefficient `ν/e` of the exceptional divisor in the pull-back of a curve.
pub fn pullback_coeff(nu: i64, e: i64) -> Rat {
    assert!(e >= 1);
    ratio(nu, e)
}

/// `E² = -e²/(d p q)` for the `(p, q)` blow-up of `X(d; a, b)`.
pub fn exc_self_int(d: i64, p: i64, q: i64, e: i64) -> Rat {
    ratio(-e * e, d * p * q)
}

/// Bézout on `P²(p, q, r)/μ_d`: `e deg1 deg2 / (d p q r)`.
pub fn bezout_wp2(deg1: i64, deg2: i64, d: i64, (p, q, r): (i64, i64, i64), e: i64) -> Rat {
    ratio(e * deg1 * deg2, d * p * q * r)
}

/// Bézout on a weighted projective line `P¹(p, q)` quotient: a curve of weighted degree
/// `ν` meets the exceptional divisor of the `(p,q)` blow-up of `X(d; a, b)` in
/// `e ν / (d p q)`.
pub fn bezout_exceptional(nu: i64, d: i64, (p, q): (i64, i64), e: i64) -> Rat {
    ratio(e * nu, d * p * q)
}

/// Univariate resultant by the Euclidean recurrence.
pub fn resultant_univariate(a: &UPoly<Rat>, b: &UPoly<Rat>) -> Rat {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else { return Rat::zero() };
    if n == 0 {
        return pow(&b.leading(), m);
    }
    let (_, r) = a.div_rem(b);
    let Some(k) = r.degree() else { return Rat::zero() };
    let sign = if (m * n) % 2 == 1 { -Rat::one() } else { Rat::one() };
    sign * pow(&b.leading(), m - k) * resultant_univariate(b, &r)
}

fn pow(x: &Rat, n: usize) -> Rat {
    num_traits::pow(x.clone(), n)
}

/// Coefficients of `f` as a polynomial in `var`, each a polynomial in the other variable.
fn coefficient_polys(f: &WPoly, var: usize) -> Vec<UPoly<Rat>> {
    let other = 1 - var;
    f.coefficients_in(var)
        .into_iter()
        .map(|c| c.to_univariate(other).expect("bivariate input"))
        .collect()
}

/// `Res_var(f, g)` as a polynomial in the remaining variable of a bivariate pair.
///
/// Computed by evaluation at points where neither leading coefficient vanishes, followed
/// by Newton interpolation.
pub fn resultant(f: &WPoly, g: &WPoly, var: usize) -> UPoly<Rat> {
    assert!(f.nvars() == 2 && g.nvars() == 2, "bivariate input");
    let cf = coefficient_polys(f, var);
    let cg = coefficient_polys(g, var);
    if f.is_zero() || g.is_zero() {
        return UPoly::zero();
    }
    let (m, n) = (cf.len() - 1, cg.len() - 1);
    let deg_t = |cs: &[UPoly<Rat>]| cs.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    // Sylvester degree bound, sharpened by Bezout on total degrees.
    let total = |p: &WPoly| p.total_degree().unwrap_or(0) as usize;
    let bound = (deg_t(&cf) * n + deg_t(&cg) * m).min(total(f) * total(g));
    let specialize = |cs: &[UPoly<Rat>], t: &Rat| UPoly::new(cs.iter().map(|c| c.eval(t)).collect());

    let mut nodes: Vec<Rat> = Vec::with_capacity(bound + 1);
    let mut values: Vec<Rat> = Vec::with_capacity(bound + 1);
    let mut k: i64 = 0;
    while nodes.len() <= bound {
        // 0, 1, -1, 2, -2, ...
        let t = Rat::from_integer(if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) }.into());
        k += 1;
        if cf[m].eval(&t).is_zero() || cg[n].eval(&t).is_zero() {
            continue;
        }
        values.push(resultant_univariate(&specialize(&cf, &t), &specialize(&cg, &t)));
        nodes.push(t);
    }
    newton_interpolate(&nodes, &values)
}

fn newton_interpolate(nodes: &[Rat], values: &[Rat]) -> UPoly<Rat> {
    let mut dd = values.to_vec();
    for level in 1..nodes.len() {
        for i in (level..nodes.len()).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&nodes[i] - &nodes[i - level]);
        }
    }
    let mut out = UPoly::zero();
    for i in (0..nodes.len()).rev() {
        let lin = UPoly::new(vec![-nodes[i].clone(), Rat::one()]);
        out = &(&out * &lin) + &UPoly::constant(dd[i].clone());
    }
    out
}

/// Intersection multiplicity at the origin of two plane curves on a smooth chart.
pub fn intersection_multiplicity(f: &WPoly, g: &WPoly) -> Result<u64, IntersectionError> {
    let origin = [Rat::zero(), Rat::zero()];
    if f.is_zero() || g.is_zero() {
        return Err(IntersectionError::CommonComponent);
    }
    if !f.eval(&origin).is_zero() || !g.eval(&origin).is_zero() {
        return Ok(0);
    }
    let x = WPoly::var(2, 0);
    let y = WPoly::var(2, 1);
    for c in 0..=MAX_SHEAR {
        let sheared = [&x + &y.scale(&Rat::from_integer(c.into())), y.clone()];
        let (fc, gc) = (f.compose(&sheared), g.compose(&sheared));
        // Leading y-coefficients must not vanish on x = 0 ...
        let lead_ok = |h: &WPoly| {
            let cs = coefficient_polys(h, 1);
            !cs.last().expect("nonzero").eval(&Rat::zero()).is_zero()
        };
        if !lead_ok(&fc) || !lead_ok(&gc) {
            continue;
        }
        // ... and the origin must be the only common point on x = 0.
        let on_line = |h: &WPoly| h.eval_var(0, &Rat::zero()).to_univariate(1).expect("univariate");
        let (fl, gl) = (on_line(&fc), on_line(&gc));
        if fl.is_zero() || gl.is_zero() {
            continue;
        }
        let common = fl.gcd(&gl);
        if common.degree() != Some(common.low_degree().unwrap_or(0)) {
            continue;
        }
        let r = resultant(&fc, &gc, 1);
        return r.low_degree().map(|k| k as u64).ok_or(IntersectionError::CommonComponent);
    }
    Err(IntersectionError::CommonComponent)
}

/// `(1/|G|) · I_0(f, g)` on the cover of `X(d; A)`.
pub fn local_int(t: &QuotientType, f: &WPoly, g: &WPoly) -> Result<Rat, IntersectionError> {
    let order = t.group_order()? as i64;
    let i = intersection_multiplicity(f, g)? as i64;
    Ok(ratio(i, order))
}

/// Sum of smooth intersection multiplicities over all affine points of the line
/// `{x_var = 0}`; needs one curve whose leading coefficient along the line is a unit there.
pub fn line_sum(f: &WPoly, g: &WPoly, var: usize) -> Result<u64, IntersectionError> {
    let other = 1 - var;
    let proper = |h: &WPoly| {
        let cs = coefficient_polys(h, other);
        !cs.last().expect("nonzero").eval(&Rat::zero()).is_zero()
    };
    if f.is_zero() || g.is_zero() {
        return Err(IntersectionError::CommonComponent);
    }
    if !proper(f) && !proper(g) {
        return Err(IntersectionError::NotProper);
    }
    let r = resultant(f, g, other);
    r.low_degree().map(|k| k as u64).ok_or(IntersectionError::CommonComponent)
}

/// Strict transforms of a germ in the two normalized charts of a blow-up.
pub fn chart_germs(bl: &Blowup2d, g: &WPoly) -> Result<[WPoly; 2], PolyError> {
    let (p, q) = (bl.weights.0 as u32, bl.weights.1 as u32);
    let e = bl.e as u32;
    let g1 = g.strict_transform((p, q), 1)?.1.root_substitute(0, e)?;
    let g2 = g.strict_transform((p, q), 2)?.1.root_substitute(1, e)?;
    Ok([g1, g2])
}

/// `E · Ĉ` as a sum of local numbers over the exceptional divisor, read from the charts.
///
/// The open part of `E` sits in chart 1 on `u = 0, v ≠ 0` where the group acts freely with
/// orbits of size `r`, so each orbit contributes its smooth number once.
pub fn exceptional_local_sum(bl: &Blowup2d, g: &WPoly) -> Result<Rat, IntersectionError> {
    let [g1, g2] = chart_germs(bl, g)?;
    let [c1, c2] = &bl.charts;
    let axis1 = g1.eval_var(0, &Rat::zero()).to_univariate(1).expect("univariate");
    let axis2 = g2.eval_var(1, &Rat::zero()).to_univariate(0).expect("univariate");
    let at_origin = |axis: &UPoly<Rat>, t: &QuotientType| -> Result<Rat, IntersectionError> {
        let order = t.group_order()? as i64;
        Ok(ratio(axis.low_degree().unwrap_or(0) as i64, order))
    };
    let o1 = at_origin(&axis1, &c1.quotient)?;
    let o2 = at_origin(&axis2, &c2.quotient)?;
    let r = c1.quotient.multiplicity_l(1);
    let open = axis1.degree().unwrap_or(0) - axis1.low_degree().unwrap_or(0);
    Ok(o1 + o2 + ratio(open as i64, r))
}

/// `Ĉ · D̂` as a sum of local numbers over the exceptional divisor.
pub fn strict_pair_sum(bl: &Blowup2d, c: &WPoly, d: &WPoly) -> Result<Rat, IntersectionError> {
    let [c1, c2] = chart_germs(bl, c)?;
    let [d1, d2] = chart_germs(bl, d)?;
    let [t1, t2] = &bl.charts;
    let on_line = line_sum(&c1, &d1, 0)? as i64;
    let at1 = intersection_multiplicity(&c1, &d1)? as i64;
    let at2 = intersection_multiplicity(&c2, &d2)? as i64;
    let r = t1.quotient.multiplicity_l(1);
    let g1 = t1.quotient.group_order()? as i64;
    let g2 = t2.quotient.group_order()? as i64;
    Ok(ratio(on_line - at1, r) + ratio(at1, g1) + ratio(at2, g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient_kernel::blowup_2d;
    use crate::rat;

    fn wp(s: &str) -> WPoly {
        WPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(pullback_coeff(6, 1), rat(6));
        assert_eq!(pullback_coeff(0, 3), rat(0));
        assert_eq!(pullback_coeff(5, 2), ratio(5, 2));
        assert_eq!(exc_self_int(1, 2, 3, 1), ratio(-1, 6));
        assert_eq!(exc_self_int(1, 1, 1, 1), rat(-1));
        assert_eq!(bezout_wp2(6, 6, 1, (2, 3, 6), 1), rat(1));
        assert_eq!(bezout_wp2(4, 4, 1, (1, 1, 1), 1), rat(16));
    }

    #[test]
    fn smooth_local_numbers() {
        assert_eq!(intersection_multiplicity(&wp("y"), &wp("x")), Ok(1));
        assert_eq!(intersection_multiplicity(&wp("y"), &wp("y - x^2")), Ok(2));
        assert_eq!(intersection_multiplicity(&wp("y^2 - x^3"), &wp("y^2 + x^3")), Ok(6));
        assert_eq!(intersection_multiplicity(&wp("x + 1"), &wp("y")), Ok(0));
        assert_eq!(intersection_multiplicity(&wp("x*y"), &wp("x*(x + y)")), Err(IntersectionError::CommonComponent));
        // Another intersection point on the vertical line must not leak in.
        assert_eq!(intersection_multiplicity(&wp("x"), &wp("y*(y - 1)")), Ok(1));
    }

    #[test]
    fn quotient_local_number() {
        // z = 0 against z + x^a on X(q; p, nu) gives a/q.
        let t = QuotientType::cyclic(7, &[3, 2]);
        assert_eq!(local_int(&t, &wp("y"), &wp("y + x^5")), Ok(ratio(5, 7)));
        assert_eq!(local_int(&QuotientType::trivial(2), &wp("x"), &wp("y")), Ok(rat(1)));
    }

    #[test]
    fn resultant_matches_sylvester_example() {
        // Res_y(y^2 - x, y - x) = x^2 - x.
        let r = resultant(&wp("y^2 - x"), &wp("y - x"), 1);
        assert_eq!(r, UPoly::new(vec![rat(0), rat(-1), rat(1)]));
    }

    #[test]
    fn cusp_exceptional_sum() {
        let bl = blowup_2d(&QuotientType::trivial(2), (2, 3)).unwrap();
        let c = wp("x^3 + y^2");
        assert_eq!(exceptional_local_sum(&bl, &c), Ok(bezout_exceptional(6, 1, (2, 3), 1)));
    }
}
