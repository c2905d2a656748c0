//! Tangent-cone analysis of a surface germ `f(x, y, z)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use qres_core::intersection_theory::resultant;
use qres_core::wpoly::{factor_univariate, rational_gcd, UPoly};
use qres_core::{Rat, WPoly};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("expected a polynomial in x, y, z")]
    WrongArity,
    #[error("the polynomial does not vanish at the origin")]
    NotThroughOrigin,
    #[error("the germ is smooth (order 1)")]
    Smooth,
    #[error("the polynomial is homogeneous: no k to detect")]
    Homogeneous,
    #[error("the tangent cone is not reduced: {0}")]
    NotReduced(String),
    #[error("singular point with irrational coordinates: {0}; pass the local germs with --germ")]
    IrrationalPoint(String),
    #[error("{0} is not a singular point of the tangent cone")]
    NotSingular(String),
    #[error("malformed point {0}; expected a:b:c with rational entries")]
    BadPoint(String),
    #[error("f_(m+k) vanishes at singular points {0:?}")]
    ConditionViolated(Vec<String>),
}

/// A point of `P²` with rational coordinates, scaled so that the last nonzero entry is 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjPoint(pub [Rat; 3]);

impl ProjPoint {
    pub fn new(coords: [Rat; 3]) -> Option<Self> {
        let pivot = coords.iter().rev().find(|c| !c.is_zero())?.clone();
        Some(ProjPoint(coords.map(|c| c / &pivot)))
    }

    /// The chart used for the local germ: the last nonzero coordinate.
    fn chart(&self) -> usize {
        (0..3).rev().find(|&i| !self.0[i].is_zero()).expect("nonzero point")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for ProjPoint {
    type Err = ConeError;
    fn from_str(s: &str) -> Result<Self, ConeError> {
        let bad = || ConeError::BadPoint(s.to_string());
        let parts: Vec<Rat> = s
            .trim_matches(|c| c == '[' || c == ']')
            .split(':')
            .map(|p| p.trim().parse::<Rat>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let coords: [Rat; 3] = parts.try_into().map_err(|_| bad())?;
        ProjPoint::new(coords).ok_or_else(bad)
    }
}

/// A singular point of the tangent cone with the germ of the cone there.
#[derive(Debug, Clone, PartialEq)]
pub struct ConePoint {
    pub point: ProjPoint,
    pub germ: WPoly,
}

/// `(m, k)` with `m` the order of `f` and `f_{m+k}` the first nonzero part above `f_m`.
///
/// Intermediate parts are zero by construction, so an `f_{m+j}` vanishing only on
/// `Sing(C)` is never absorbed into a larger `k`.
pub fn detect_mk(f: &WPoly) -> Result<(u64, u64), ConeError> {
    if f.nvars() != 3 {
        return Err(ConeError::WrongArity);
    }
    let m = f.order().ok_or(ConeError::NotThroughOrigin)?;
    if m == 0 {
        return Err(ConeError::NotThroughOrigin);
    }
    let top = f.total_degree().expect("nonzero");
    (m + 1..=top)
        .find(|&d| !f.homogeneous_part(d).is_zero())
        .map(|d| (u64::from(m), u64::from(d - m)))
        .ok_or(ConeError::Homogeneous)
}

/// Restriction to the affine chart `{x_chart = 1}`, remaining coordinates in order.
fn dehomogenize(f: &WPoly, chart: usize) -> WPoly {
    let mut images = Vec::new();
    let mut next = 0;
    for i in 0..3 {
        if i == chart {
            images.push(WPoly::one(2));
        } else {
            images.push(WPoly::var(2, next));
            next += 1;
        }
    }
    f.compose(&images)
}

/// Germ of `f` at `p` in the chart of its last nonzero coordinate.
pub fn germ_at(f: &WPoly, p: &ProjPoint) -> WPoly {
    let chart = p.chart();
    let affine: Vec<Rat> = (0..3).filter(|&i| i != chart).map(|i| p.0[i].clone()).collect();
    dehomogenize(f, chart).translate_point(&affine)
}

fn partials(f: &WPoly) -> [WPoly; 4] {
    [f.clone(), f.derivative(0), f.derivative(1), f.derivative(2)]
}

fn univariate(p: &WPoly, var: usize) -> UPoly<Rat> {
    p.to_univariate(var).expect("univariate after substitution")
}

fn gcd_all(polys: impl IntoIterator<Item = UPoly<Rat>>) -> UPoly<Rat> {
    polys.into_iter().fold(UPoly::zero(), |acc, p| rational_gcd(&acc, &p))
}

/// Extended Euclid in `Q[t]`: `(g, s)` with `s a ≡ g (mod b)`.
fn ext_gcd(a: &UPoly<Rat>, b: &UPoly<Rat>) -> (UPoly<Rat>, UPoly<Rat>) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = &s0 - &(&q * &s1);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
    }
    (r0, s0)
}

/// Arithmetic in the number field `Q[t]/(phi)`, `phi` irreducible.
struct NumberField<'a> {
    phi: &'a UPoly<Rat>,
}

impl NumberField<'_> {
    fn reduce(&self, a: &UPoly<Rat>) -> UPoly<Rat> {
        a.div_rem(self.phi).1
    }

    fn inverse(&self, a: &UPoly<Rat>) -> UPoly<Rat> {
        let (g, s) = ext_gcd(a, self.phi);
        let c = g.coeff(0);
        self.reduce(&s.scale(&(Rat::one() / c)))
    }

    /// Remainder of `a` by `b` in `K[y]`, coefficients listed from degree 0.
    fn rem(&self, a: &[UPoly<Rat>], b: &[UPoly<Rat>]) -> Vec<UPoly<Rat>> {
        let mut r: Vec<UPoly<Rat>> = a.to_vec();
        let lead_inv = self.inverse(b.last().expect("nonzero divisor"));
        while r.len() >= b.len() {
            let c = self.reduce(&(r.last().expect("nonempty") * &lead_inv));
            let shift = r.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                r[shift + j] = self.reduce(&(&r[shift + j] - &(&c * bj)));
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    /// Degree of the gcd in `K[y]` of polynomials with coefficients in `Q[t]`.
    fn gcd_degree(&self, polys: &[Vec<UPoly<Rat>>]) -> Option<usize> {
        let mut acc: Vec<UPoly<Rat>> = Vec::new();
        for p in polys {
            let mut b: Vec<UPoly<Rat>> = p.iter().map(|c| self.reduce(c)).collect();
            trim(&mut b);
            let mut a = std::mem::take(&mut acc);
            while !b.is_empty() {
                let r = self.rem(&a, &b);
                a = b;
                b = r;
            }
            acc = a;
        }
        (!acc.is_empty()).then(|| acc.len() - 1)
    }
}

fn trim(v: &mut Vec<UPoly<Rat>>) {
    while v.last().is_some_and(UPoly::is_zero) {
        v.pop();
    }
}

/// Rational singular points of the projective curve `fm = 0`, each with its local germ.
///
/// The affine chart `z = 1` is solved by eliminating `y` with resultants; each factor of
/// the eliminant is either a rational abscissa, solved directly, or an irreducible factor
/// whose roots are tested for a common solution over the number field it defines. The
/// line at infinity is a univariate problem.
pub fn sing_points(fm: &WPoly) -> Result<Vec<ConePoint>, ConeError> {
    if fm.nvars() != 3 {
        return Err(ConeError::WrongArity);
    }
    let eqs = partials(fm);
    let mut points = Vec::new();

    // Chart z = 1: by Euler's identity F = F_x = F_y = 0 there implies F_z = 0.
    let affine: Vec<WPoly> = eqs[..3].iter().map(|e| dehomogenize(e, 2)).filter(|e| !e.is_zero()).collect();
    let mut eliminant = UPoly::zero();
    for (i, j) in [(1, 2), (0, 1), (0, 2)] {
        if let (Some(a), Some(b)) = (affine.get(i), affine.get(j)) {
            eliminant = rational_gcd(&eliminant, &resultant(a, b, 1));
        }
        // Two independent eliminants usually suffice.
        if i == 0 && !eliminant.is_zero() {
            break;
        }
    }
    if eliminant.is_zero() {
        return Err(ConeError::NotReduced(format!("{fm} has a singular component")));
    }
    if eliminant.degree().unwrap_or(0) > 0 {
        for (phi, _) in factor_univariate(&eliminant).factors {
            if phi.degree() == Some(1) {
                let x0 = -phi.coeff(0) / phi.coeff(1);
                let fibre = gcd_all(affine.iter().map(|e| univariate(&e.eval_var(0, &x0), 1)));
                if fibre.is_zero() {
                    return Err(ConeError::NotReduced(format!("the line x = {x0} is singular")));
                }
                for y0 in rational_points(&fibre, || format!("x = {x0}, y a root of {fibre}"))? {
                    points.push(ProjPoint::new([x0.clone(), y0, Rat::one()]).expect("nonzero"));
                }
            } else {
                let field = NumberField { phi: &phi };
                let in_y: Vec<Vec<UPoly<Rat>>> = affine
                    .iter()
                    .map(|e| e.coefficients_in(1).iter().map(|c| univariate(c, 0)).collect())
                    .collect();
                if field.gcd_degree(&in_y).is_some_and(|d| d > 0) {
                    return Err(ConeError::IrrationalPoint(format!("x a root of {phi}")));
                }
            }
        }
    }

    // Line at infinity, chart y = 1: points [x : 1 : 0].
    let at_inf = gcd_all(eqs.iter().map(|e| univariate(&dehomogenize(e, 1).eval_var(1, &Rat::zero()), 0)));
    if at_inf.is_zero() {
        return Err(ConeError::NotReduced("the line at infinity is singular".into()));
    }
    for x0 in rational_points(&at_inf, || format!("[x:1:0] with x a root of {at_inf}"))? {
        points.push(ProjPoint::new([x0, Rat::one(), Rat::zero()]).expect("nonzero"));
    }
    let corner = [Rat::one(), Rat::zero(), Rat::zero()];
    if eqs.iter().all(|e| e.eval(&corner).is_zero()) {
        points.push(ProjPoint::new(corner).expect("nonzero"));
    }

    points.sort();
    points.dedup();
    Ok(points.into_iter().map(|p| ConePoint { germ: germ_at(fm, &p), point: p }).collect())
}

/// Roots of `u`, all of which must be rational.
fn rational_points(u: &UPoly<Rat>, describe: impl Fn() -> String) -> Result<Vec<Rat>, ConeError> {
    if u.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (phi, _) in factor_univariate(u).factors {
        if phi.degree() != Some(1) {
            return Err(ConeError::IrrationalPoint(describe()));
        }
        out.push(-phi.coeff(0) / phi.coeff(1));
    }
    Ok(out)
}

/// Checks that user-supplied points are singular on the cone and attaches germs.
pub fn given_points(fm: &WPoly, pts: &[ProjPoint]) -> Result<Vec<ConePoint>, ConeError> {
    let eqs = partials(fm);
    pts.iter()
        .map(|p| {
            if eqs.iter().all(|e| e.eval(&p.0).is_zero()) {
                Ok(ConePoint { point: p.clone(), germ: germ_at(fm, p) })
            } else {
                Err(ConeError::NotSingular(p.to_string()))
            }
        })
        .collect()
}

/// `f_{m+k}(P) != 0` at every singular point.
pub fn check_condition(f_mk: &WPoly, points: &[ConePoint]) -> Result<(), ConeError> {
    let bad: Vec<String> =
        points.iter().filter(|p| f_mk.eval(&p.point.0).is_zero()).map(|p| p.point.to_string()).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(ConeError::ConditionViolated(bad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qres_core::oracles::milnor_jacobian;
    use qres_core::rat;

    fn wp(s: &str) -> WPoly {
        WPoly::parse(s, 3).unwrap()
    }

    #[test]
    fn detects_m_and_k() {
        assert_eq!(detect_mk(&wp("y^2*z - x^3 + z^4")), Ok((3, 1)));
        assert_eq!(detect_mk(&wp("y^2*z - x^3 + z^5")), Ok((3, 2)));
        assert_eq!(detect_mk(&wp("x + y + z")), Err(ConeError::Homogeneous));
        assert_eq!(detect_mk(&wp("x + y + z + x^2")), Ok((1, 1)));
        assert_eq!(detect_mk(&wp("1 + x^2")), Err(ConeError::NotThroughOrigin));
    }

    #[test]
    fn cuspidal_cubic_point() {
        let pts = sing_points(&wp("y^2*z - x^3")).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].point, ProjPoint::new([rat(0), rat(0), rat(1)]).unwrap());
        assert_eq!(pts[0].germ, WPoly::parse("y^2 - x^3", 2).unwrap());
    }

    #[test]
    fn smooth_conic_has_none() {
        assert!(sing_points(&wp("x^2 + y^2 - z^2")).unwrap().is_empty());
    }

    #[test]
    fn node_away_from_origin() {
        // Nodal cubic with the node moved to [1:1:1].
        let f = wp("(y - z)^2*z - (x - z)^2*x");
        let pts = sing_points(&f).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].point, ProjPoint::new([rat(1), rat(1), rat(1)]).unwrap());
        assert_eq!(pts[0].germ.order(), Some(2));
        assert_eq!(milnor_jacobian(&pts[0].germ), Ok(1));
    }

    #[test]
    fn points_at_infinity() {
        // Three concurrent lines through [0:1:0] plus a general one.
        let pts = sing_points(&wp("x*(x - z)*(x + z)*y")).unwrap();
        let labels: Vec<String> = pts.iter().map(|p| p.point.to_string()).collect();
        assert!(labels.contains(&"[0:1:0]".to_string()), "{labels:?}");
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn irrational_points_are_reported() {
        // Nodes at [±√2 : 0 : 1].
        let f = wp("(x^2 - 2*z^2)^2 - y^2*z^2");
        assert!(matches!(sing_points(&f), Err(ConeError::IrrationalPoint(_))));
    }

    #[test]
    fn non_reduced_cone_is_rejected() {
        assert!(matches!(sing_points(&wp("x^2*y")), Err(ConeError::NotReduced(_))));
    }

    #[test]
    fn condition_check() {
        let pts = sing_points(&wp("y^2*z - x^3")).unwrap();
        assert!(check_condition(&wp("z^4"), &pts).is_ok());
        assert!(check_condition(&wp("x^4"), &pts).is_err());
        assert!(check_condition(&wp("x^4"), &[]).is_ok());
    }

    #[test]
    fn parses_points() {
        let p: ProjPoint = "2:0:2".parse().unwrap();
        assert_eq!(p.to_string(), "[1:0:1]");
        assert!("1:2".parse::<ProjPoint>().is_err());
        assert!("0:0:0".parse::<ProjPoint>().is_err());
    }
}
