//! Chart-level replay of the lift.
//!
//! Each curve blow-up is redone in space on the raw (non-normalized) charts of
//! `blowup_3d`. A local model keeps the total transform as
//! `x^{nx} y^{ny} z^m S` with strict transform `S = z^k + g(x^{sx}, y^{sy})`, `g` the
//! germ of the matching curve model; the exponents `sx, sy` absorb the mismatch between
//! raw space charts and normalized curve charts. Strata are then recounted from group
//! orders and root counts, independently of the closed formulas used by the lift.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::{LiftError, SurfaceResolution, SurfaceStratumKind};
use crate::curve_resolver::{DivisorInfo2D, ModelOrigin, StratumKind};
use crate::quotient_kernel::{blowup_3d, char_order, QuotientType};
use crate::wpoly::UPoly;
use crate::{rat, CurveResolution, Rat, WPoly};

/// Recomputed data for one lifted divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorCheck {
    pub point: usize,
    pub divisor: usize,
    /// Weights used on the raw chart; they agree with the lifted weights up to the
    /// coordinate powers `sx, sy` of the center.
    pub chart_weights: (i64, i64, i64),
    /// Exponent of the exceptional coordinate in the raw chart.
    pub raw_exponent: i64,
    pub multiplicity: Option<i64>,
    pub strata: Vec<(SurfaceStratumKind, i64, Option<u64>)>,
    /// Order of the group acting on `E0 ∩ E_b` inside `E_b`: the `z`-character of the
    /// stabilizer of a generic point. Pseudo-reflections fixing `E_b` do not count.
    pub o_ebz: usize,
    #[serde(serialize_with = "crate::curve_resolver::rat_str")]
    pub bezout: Rat,
    pub triple_points: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: usize,
    pub mismatches: Vec<String>,
    pub divisors: Vec<DivisorCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.mismatches.push(msg());
        }
    }
}

/// Space model above a curve model.
#[derive(Debug, Clone)]
struct Model3 {
    quotient: QuotientType,
    nx: i64,
    ny: i64,
    sx: u32,
    sy: u32,
    strict: WPoly,
}

fn z_power(k: u64) -> WPoly {
    WPoly::monomial(vec![0, 0, k as u32], rat(1))
}

/// `z^k + g(x^{sx}, y^{sy})`.
fn expected_strict(g: &WPoly, k: u64, sx: u32, sy: u32) -> WPoly {
    &z_power(k) + &g.pullback(&[vec![sx, 0, 0], vec![0, sy, 0]])
}

/// Number of distinct nonzero complex roots.
fn distinct_nonzero_roots(f: &UPoly<Rat>) -> i64 {
    let (_, rest) = f.strip_t_power();
    let Some(deg) = rest.degree() else { return 0 };
    let common = rest.gcd(&rest.derivative());
    (deg - common.degree().unwrap_or(0)) as i64
}

/// Order of `G / (G ∩ C*_w)`, the group acting effectively on `P²_w`.
fn effective_order(t: &QuotientType, w: [i64; 3]) -> Result<usize, LiftError> {
    let elements = t.elements()?;
    let big = t.exponent();
    let on_orbit: BTreeSet<Vec<i64>> =
        (0..big).map(|s| w.iter().map(|wi| (s * wi).rem_euclid(big)).collect()).collect();
    let inside = elements.iter().filter(|g| on_orbit.contains(*g)).count();
    Ok(elements.len() / inside)
}

fn divide(num: i64, den: i64) -> Option<i64> {
    (den != 0 && num % den == 0).then(|| num / den)
}

/// Replays every lifted blow-up on explicit charts and compares the recounted strata,
/// multiplicities and intersection data with the lifted records.
pub fn verify_lift(res: &SurfaceResolution) -> Result<VerifyReport, LiftError> {
    let mut report = VerifyReport::default();
    for (pi, curve) in res.curves.iter().enumerate() {
        replay_point(res, pi, curve, &mut report)?;
    }
    Ok(report)
}

fn replay_point(
    res: &SurfaceResolution,
    pi: usize,
    curve: &CurveResolution,
    report: &mut VerifyReport,
) -> Result<(), LiftError> {
    let k = res.k;
    let centers: BTreeSet<usize> = curve.divisors.iter().map(|d| d.center).collect();
    let mut models: BTreeMap<usize, Model3> = BTreeMap::new();
    let root_germ = &curve.models[0].germ;
    models.insert(
        0,
        Model3 {
            quotient: QuotientType::trivial(3),
            nx: 0,
            ny: 0,
            sx: 1,
            sy: 1,
            strict: expected_strict(root_germ, k, 1, 1),
        },
    );
    for dv in &curve.divisors {
        let base = models
            .get(&dv.center)
            .cloned()
            .ok_or_else(|| LiftError::Unsupported(format!("center of E{} was not replayed", dv.id)))?;
        let check = replay_divisor(res, pi, curve, dv, &base, &centers, report)?;
        for (mid, model) in check.1 {
            models.insert(mid, model);
        }
        report.divisors.push(check.0);
    }
    Ok(())
}

fn replay_divisor(
    res: &SurfaceResolution,
    pi: usize,
    curve: &CurveResolution,
    dv: &DivisorInfo2D,
    base: &Model3,
    centers: &BTreeSet<usize>,
    report: &mut VerifyReport,
) -> Result<(DivisorCheck, Vec<(usize, Model3)>), LiftError> {
    let (m, k) = (res.m as i64, res.k as i64);
    let tag = format!("{} E{}", res.points[pi].label, dv.id);
    let (p, q) = dv.weights;
    let (sx, sy) = (i64::from(base.sx), i64::from(base.sy));
    // Primitive vector proportional to (p / sx, q / sy, ν / k).
    let raw = [p * sy * k, q * sx * k, dv.nu * sx * sy];
    let g = raw[0].gcd(&raw[1]).gcd(&raw[2]);
    let w = raw.map(|c| c / g);
    let (wp, wq, wr) = (w[0], w[1], w[2]);
    let charts = blowup_3d(&base.quotient, (wp, wq, wr))?;

    let order = base.strict.w_order(&w)?;
    report.check(order == wr * k, || format!("{tag}: weighted order {order} of the strict transform, expected {}", wr * k));
    let n = wp * base.nx + wq * base.ny + wr * m + order;

    let lifted = res
        .divisors
        .iter()
        .find(|d| d.point == pi && d.divisor == dv.id)
        .ok_or_else(|| LiftError::Unsupported(format!("{tag} missing from the lift")))?;

    let zk = z_power(res.k);
    let strict: Vec<WPoly> = (0..3)
        .map(|i| {
            let mut div = vec![0u32; 3];
            div[i] = order as u32;
            base.strict.pullback(&charts[i].gluing.images).div_monomial(&div).expect("weighted order divides")
        })
        .collect();
    let groups: Vec<(Vec<Vec<i64>>, i64)> =
        charts.iter().map(|c| Ok((c.quotient.elements()?, c.quotient.exponent()))).collect::<Result<_, LiftError>>()?;

    // Coordinate powers on the new charts.
    let scaled = |w_raw: i64, s: i64, c: i64| divide(w_raw * s * dv.e, c);
    let sx1 = scaled(wp, sx, p);
    let sy2 = scaled(wq, sy, q);
    let (Some(sx1), Some(sy2)) = (sx1, sy2) else {
        return Err(LiftError::Unsupported(format!("{tag}: non-integral coordinate power")));
    };

    let mut new_models = Vec::new();
    for model in &curve.models {
        let (quotient, nx, ny, msx, msy, s) = match &model.origin {
            ModelOrigin::ChartOrigin { divisor, chart: 1 } if *divisor == dv.id => {
                (charts[0].quotient.clone(), n, base.ny, sx1 as u32, base.sy, strict[0].clone())
            }
            ModelOrigin::ChartOrigin { divisor, chart: 2 } if *divisor == dv.id => {
                (charts[1].quotient.clone(), base.nx, n, base.sx, sy2 as u32, strict[1].clone())
            }
            ModelOrigin::OpenPoint { divisor, v0 } if *divisor == dv.id && centers.contains(&model.id) => {
                if base.sy != 1 {
                    return Err(LiftError::Unsupported(format!(
                        "{tag}: open point v = {v0} under a coordinate power {}",
                        base.sy
                    )));
                }
                let stab = charts[0].quotient.stabilizer(&[false, true, false])?;
                let t = QuotientType::from_elements(3, charts[0].quotient.exponent(), &stab);
                (t, n, 0, sx1 as u32, 1, strict[0].translate(1, v0))
            }
            _ => continue,
        };
        let want = expected_strict(&model.germ, res.k, msx, msy);
        report.check(s == want, || format!("{tag}: strict transform at model {} is {s}, expected {want}", model.id));
        let total = &WPoly::monomial(vec![nx as u32, ny as u32, m as u32], rat(1)) * &s;
        report.check(quotient.is_function(&total), || {
            format!("{tag}: total transform at model {} is not invariant under {quotient}", model.id)
        });
        new_models.push((model.id, Model3 { quotient, nx, ny, sx: msx, sy: msy, strict: s }));
    }

    // Strata of E_b = {X = 0} in chart 1 and {Y = 0} in chart 2; E0 is {Z = 0}.
    let h1 = &strict[0] - &zk;
    let on_line = h1.eval_var(0, &Rat::zero()).eval_var(2, &Rat::zero());
    let f = on_line.to_univariate(1).expect("univariate in y");
    let r_f = distinct_nonzero_roots(&f);
    let (e1, big1) = &groups[0];
    let (e2, big2) = &groups[1];
    let (e3, big3) = &groups[2];
    let g1 = e1.len() as i64;
    let h0 = charts[0].quotient.stabilizer(&[false, true, true])?;
    let mut strata = Vec::new();

    let chi_one = divide(k * r_f * h0.len() as i64, g1);
    // Pseudo-reflections fixing E_b pointwise divide the raw exponent.
    let l_one = char_order(&h0, 0, *big1);
    let multiplicity = divide(n, l_one);
    report.check(multiplicity == Some(lifted.multiplicity as i64), || {
        format!("{tag}: chart multiplicity {n}/{l_one}, lifted {}", lifted.multiplicity)
    });
    strata.push((SurfaceStratumKind::One, chi_one, divide(n, l_one)));

    let c1 = f.coeff(0);
    let ord_z1 = char_order(e1, 2, *big1);
    let pts1 = if c1.is_zero() { 0 } else { k };
    let chi_x = if base.ny > 0 { Some(0) } else { divide(-pts1, ord_z1) };
    let l_x = charts[0].quotient.stratum_l(&[false, false, true], 0)?;
    strata.push((SurfaceStratumKind::X, chi_x, divide(n, l_x)));

    let c2 = (&strict[1] - &zk).constant_term();
    let ord_z2 = char_order(e2, 2, *big2);
    let pts2 = if c2.is_zero() { 0 } else { k };
    let chi_y = if base.nx > 0 { Some(0) } else { divide(-pts2, ord_z2) };
    let l_y = charts[1].quotient.stratum_l(&[false, false, true], 1)?;
    strata.push((SurfaceStratumKind::Y, chi_y, divide(n, l_y)));

    report.check(!strict[2].constant_term().is_zero(), || format!("{tag}: strict transform through [0:0:1]"));
    let chi_xy = i64::from(base.nx == 0 && base.ny == 0);
    strata.push((SurfaceStratumKind::XY, Some(chi_xy), divide(n, char_order(e3, 2, *big3))));

    let mut recorded = Vec::new();
    for (kind, chi, mult) in strata {
        let expected = lifted.strata.iter().find(|s| s.kind == kind).expect("all four strata lifted");
        let Some(chi) = chi else {
            report.check(false, || format!("{tag} {kind:?}: non-integral orbit count"));
            continue;
        };
        report.check(chi == expected.chi, || format!("{tag} {kind:?}: chart χ = {chi}, lifted χ = {}", expected.chi));
        let mult = mult.map(|v| v as u64);
        if chi != 0 {
            report.check(mult.is_some() && mult == expected.multiplicity, || {
                format!("{tag} {kind:?}: chart multiplicity {mult:?}, lifted {:?}", expected.multiplicity)
            });
        }
        recorded.push((kind, chi, mult));
    }

    // gcd point counts: V̂ meets the line over a curve chart origin in gcd(k, m(ě)) orbits.
    for (kind, c, ord_z) in [(StratumKind::X, &c1, ord_z1), (StratumKind::Y, &c2, ord_z2)] {
        let curve_stratum = curve.strata.iter().find(|s| s.divisor == dv.id && s.kind == kind);
        if let (false, Some(cm)) = (c.is_zero(), curve_stratum.and_then(|s| s.multiplicity)) {
            let expected = res.k.gcd(&cm) as i64;
            report.check(divide(k, ord_z) == Some(expected), || {
                format!("{tag} {kind:?}: {k} points over {ord_z} orbits, expected gcd(k, {cm}) = {expected}")
            });
        }
    }

    // Points of E0 ∩ V̂ ∩ E_b against the open points of the curve divisor.
    let ord_y1 = char_order(e1, 1, *big1);
    let triple = divide(r_f, ord_y1).unwrap_or(-1);
    report.check(triple == dv.open_orbits() as i64, || {
        format!("{tag}: {triple} triple-point orbits, curve divisor has {}", dv.open_orbits())
    });

    // Bezout on E_b = P²_w / G: (E0 . V̂)_{E_b} = R * kR / (PQR |G_eff|) against the curve
    // number E_b . Ĉ scaled by the stabilizer order along E0 ∩ E_b.
    let o_ebz = char_order(&charts[0].quotient.stabilizer(&[false, true, false])?, 2, *big1) as usize;
    let g_eff = effective_order(&base.quotient, w)? as i64;
    let bezout = Rat::new((wr * wr * k).into(), (wp * wq * wr * g_eff).into());
    let expected = &dv.strict_intersection / rat(o_ebz as i64);
    report.check(bezout == expected, || format!("{tag}: space Bezout {bezout}, curve number {expected}"));

    Ok((
        DivisorCheck {
            point: pi,
            divisor: dv.id,
            chart_weights: (wp, wq, wr),
            raw_exponent: n,
            multiplicity,
            strata: recorded,
            o_ebz,
            bezout,
            triple_points: triple,
        },
        new_models,
    ))
}
