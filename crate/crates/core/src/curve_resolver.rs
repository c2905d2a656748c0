//! Embedded Q-resolution of plane curve germs by weighted blow-ups at points.
//!
//! The resolver keeps a queue of local models. A local model is a chart origin (or a
//! translated point) of type `X(d; a, b)` where the total transform reads
//! `u^A v^B g(u, v)`, `{u = 0}` and `{v = 0}` being exceptional divisors when their
//! exponents are positive and `g` the strict transform. Points failing Q-normal crossings
//! are blown up with weights read off the Newton polygon of `g`.
//!
//! Points of an exceptional divisor away from its two chart origins are identified up to
//! the group action: with `r` the order of the group acting on the open part, `g(0, v)`
//! factors as `v^c G(v^r)` and distinct roots of `G` are distinct points.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::monodromy::{acampo, milnor_from_strata, CharProduct};
use crate::quotient_kernel::{blowup_2d, QuotientError, QuotientType};
use crate::wpoly::factor::rational_nth_root;
use crate::wpoly::{factor_univariate, PolyError, UPoly};
use crate::{ratio, Rat, WPoly};

/// Hard cap on the number of blow-ups in one resolution.
pub const MAX_BLOWUPS: usize = 400;

pub type DivId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("the germ does not vanish at the origin")]
    NotThroughOrigin,
    #[error("the germ is not reduced or not isolated: {0}")]
    NonIsolated(String),
    #[error("non-rational center: {0}")]
    NonRationalCenter(String),
    #[error("weight script exhausted after {0} blow-ups")]
    ScriptExhausted(usize),
    #[error("blow-up limit of {0} reached")]
    BlowupLimit(usize),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// How blow-up weights are chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Newton-polygon weights at every center.
    #[default]
    Auto,
    /// Weights consumed in processing order, one per blow-up.
    Script(Vec<(i64, i64)>),
}

pub(crate) fn rat_str<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// Where a local model sits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ModelOrigin {
    Root,
    /// Origin of chart 1 (`[1:0]`) or chart 2 (`[0:1]`) of a divisor.
    ChartOrigin { divisor: DivId, chart: u8 },
    /// A rational point `v = v0` on the open part of a divisor, in chart-1 coordinates.
    OpenPoint {
        divisor: DivId,
        #[serde(serialize_with = "rat_str")]
        v0: Rat,
    },
}

/// A chart neighbourhood: total transform `u^{u_exp} v^{v_exp} germ` on `quotient`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalModel2 {
    pub id: usize,
    pub quotient: QuotientType,
    pub u_div: Option<DivId>,
    pub u_exp: i64,
    pub v_div: Option<DivId>,
    pub v_exp: i64,
    pub germ: WPoly,
    pub origin: ModelOrigin,
}

/// Local status of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Crossing {
    /// The strict transform avoids the point.
    Off,
    /// Q-normal crossings with the strict transform through the point.
    Transverse,
    /// Not Q-normal crossings.
    NonTransverse,
}

impl LocalModel2 {
    fn zero() -> [Rat; 2] {
        [Rat::zero(), Rat::zero()]
    }

    pub fn passes(&self) -> bool {
        self.germ.eval(&Self::zero()).is_zero()
    }

    pub fn crossing(&self) -> Crossing {
        if !self.passes() {
            return Crossing::Off;
        }
        let along = |var: usize| {
            // Order of g restricted to the axis where the other coordinate vanishes.
            let other = 1 - var;
            let restricted = self.germ.eval_var(other, &Rat::zero());
            restricted.min_degree_in(var)
        };
        let ok = match (self.u_exp > 0, self.v_exp > 0) {
            (false, false) => self.germ.order() == Some(1),
            (true, false) => along(1) == Some(1),
            (false, true) => along(0) == Some(1),
            (true, true) => false,
        };
        if ok {
            Crossing::Transverse
        } else {
            Crossing::NonTransverse
        }
    }
}

/// Kinds of points recorded on an exceptional divisor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PointKind {
    ChartOrigin(u8),
    /// A Galois orbit of points on the open part: roots of an irreducible factor of `G`.
    Open {
        factor: String,
        orbits: usize,
        multiplicity: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointStatus {
    /// Neither the strict transform nor a later divisor passes.
    Free,
    /// The strict transform crosses transversally and stays.
    Transverse,
    /// Blown up; the divisor created there.
    BlownUp(DivId),
}

/// A point of an exceptional divisor, as seen right after its creation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointOnDivisor {
    pub kind: PointKind,
    pub status: PointStatus,
    /// Local model id (chart origins and translated points).
    pub model: Option<usize>,
    /// The earlier divisor through this point, if any.
    pub other_divisor: Option<DivId>,
    /// Local intersection number of the divisor with the strict transform at one point
    /// of the orbit, computed at creation.
    #[serde(serialize_with = "rat_str")]
    pub local_int: Rat,
}

/// Per-divisor data of the resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisorInfo2D {
    pub id: DivId,
    /// Model id of the blow-up center.
    pub center: usize,
    pub weights: (i64, i64),
    /// Weighted multiplicity of the strict transform at the center.
    pub nu: i64,
    /// `gcd(d, pb - qa)` of the center type.
    pub e: i64,
    /// Order of the group at the center.
    pub center_order: i64,
    /// Multiplicity in the total transform.
    pub multiplicity: i64,
    #[serde(serialize_with = "rat_str")]
    pub self_intersection: Rat,
    /// Normalized chart types at the two origins.
    pub charts: [QuotientType; 2],
    /// Order of the group acting on the open part of the divisor (in chart 1).
    pub open_orbit_order: i64,
    pub points: Vec<PointOnDivisor>,
    /// `E . C^ = e nu / (d p q)` at creation.
    #[serde(serialize_with = "rat_str")]
    pub strict_intersection: Rat,
}

impl DivisorInfo2D {
    pub fn origin_point(&self, chart: u8) -> &PointOnDivisor {
        self.points.iter().find(|pt| pt.kind == PointKind::ChartOrigin(chart)).expect("both origins recorded")
    }

    /// Number of points on the open part met by the strict transform or later divisors.
    pub fn open_orbits(&self) -> usize {
        self.points
            .iter()
            .map(|pt| match pt.kind {
                PointKind::Open { orbits, .. } => orbits,
                PointKind::ChartOrigin(_) => 0,
            })
            .sum()
    }

    /// Sum of the local numbers with the strict transform at creation.
    pub fn local_sum(&self) -> Rat {
        self.points
            .iter()
            .map(|pt| match pt.kind {
                PointKind::Open { orbits, .. } => &pt.local_int * Rat::from_integer(orbits.into()),
                PointKind::ChartOrigin(_) => pt.local_int.clone(),
            })
            .sum()
    }
}

/// Stratum labels on an exceptional divisor: `One` is the open part minus the two chart
/// origins, `X` the chart-1 origin, `Y` the chart-2 origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum StratumKind {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stratum2D {
    pub divisor: DivId,
    pub kind: StratumKind,
    pub chi: i64,
    /// `m / L`; `None` only for empty strata where it is not integral.
    pub multiplicity: Option<u64>,
}

/// The full resolution record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveResolution {
    pub germ: WPoly,
    pub models: Vec<LocalModel2>,
    pub divisors: Vec<DivisorInfo2D>,
    pub strata: Vec<Stratum2D>,
    /// Edges of the dual graph of exceptional divisors.
    pub edges: BTreeSet<(DivId, DivId)>,
    /// One arrow per strict-transform point on a divisor (branches), for the augmented graph.
    pub arrows: Vec<DivId>,
    /// `(worst order, number of non-transverse points)` after each blow-up.
    pub complexity: Vec<(u32, usize)>,
}

/// Newton-polygon weights `(p, q)` for a germ through the origin.
///
/// Among the compact faces touching a vertex of minimal total degree, the one with the
/// largest `p + q` wins. Germs of the form `x y * unit` and smooth germs get `(1, 1)`.
pub fn newton_weights(h: &WPoly) -> Result<(i64, i64), ResolveError> {
    if h.is_zero() {
        return Err(ResolveError::NonIsolated("zero germ".into()));
    }
    if !h.constant_term().is_zero() {
        return Err(ResolveError::NotThroughOrigin);
    }
    let vertices = newton_vertices(h);
    if vertices.len() == 1 {
        let (a, b) = vertices[0];
        return if a + b == 1 || (a, b) == (1, 1) {
            Ok((1, 1))
        } else {
            Err(ResolveError::NonIsolated(format!("monomial germ x^{a} y^{b} times a unit")))
        };
    }
    let min_deg = vertices.iter().map(|&(a, b)| a + b).min().expect("nonempty");
    let mut best: Option<(i64, i64)> = None;
    for w in vertices.windows(2) {
        let ((a1, b1), (a2, b2)) = (w[0], w[1]);
        if a1 + b1 != min_deg && a2 + b2 != min_deg {
            continue;
        }
        let g = (b1 - b2).gcd(&(a2 - a1));
        let cand = ((b1 - b2) / g, (a2 - a1) / g);
        if best.is_none_or(|b| cand.0 + cand.1 > b.0 + b.1) {
            best = Some(cand);
        }
    }
    Ok(best.expect("a face touches every vertex"))
}

/// Vertices of the Newton polygon, by increasing `x`-exponent (decreasing `y`-exponent).
fn newton_vertices(h: &WPoly) -> Vec<(i64, i64)> {
    let mut lowest: BTreeMap<i64, i64> = BTreeMap::new();
    for (e, _) in h.terms() {
        let (a, b) = (i64::from(e[0]), i64::from(e[1]));
        let slot = lowest.entry(a).or_insert(b);
        *slot = (*slot).min(b);
    }
    // Keep only points that strictly lower the y-exponent as x grows.
    let mut staircase: Vec<(i64, i64)> = Vec::new();
    for (a, b) in lowest {
        if staircase.last().is_none_or(|&(_, pb)| b < pb) {
            staircase.push((a, b));
        }
    }
    // Lower convex hull of the staircase.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in staircase {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// Incremental resolver; [`resolve_curve`] drives it to completion.
pub struct CurveResolver {
    strategy: Strategy,
    script_pos: usize,
    res: CurveResolution,
    pending: VecDeque<usize>,
}

impl CurveResolver {
    pub fn new(h: &WPoly, strategy: Strategy) -> Result<Self, ResolveError> {
        assert_eq!(h.nvars(), 2, "plane germs only");
        if h.is_zero() {
            return Err(ResolveError::NonIsolated("zero germ".into()));
        }
        if !h.constant_term().is_zero() {
            return Err(ResolveError::NotThroughOrigin);
        }
        let root = LocalModel2 {
            id: 0,
            quotient: QuotientType::trivial(2),
            u_div: None,
            u_exp: 0,
            v_div: None,
            v_exp: 0,
            germ: h.clone(),
            origin: ModelOrigin::Root,
        };
        let mut pending = VecDeque::new();
        if root.crossing() == Crossing::NonTransverse {
            pending.push_back(0);
        }
        let res = CurveResolution {
            germ: h.clone(),
            models: vec![root],
            divisors: Vec::new(),
            strata: Vec::new(),
            edges: BTreeSet::new(),
            arrows: Vec::new(),
            complexity: Vec::new(),
        };
        Ok(CurveResolver { strategy, script_pos: 0, res, pending })
    }

    /// Points where the current total transform fails Q-normal crossings.
    pub fn nt_locus(&self) -> Vec<&LocalModel2> {
        self.pending.iter().map(|&i| &self.res.models[i]).collect()
    }

    pub fn is_done(&self) -> bool {
        self.pending.is_empty()
    }

    fn next_weights(&mut self, g: &WPoly) -> Result<(i64, i64), ResolveError> {
        match &self.strategy {
            Strategy::Auto => newton_weights(g),
            Strategy::Script(ws) => {
                let w = ws.get(self.script_pos).copied().ok_or(ResolveError::ScriptExhausted(self.script_pos))?;
                self.script_pos += 1;
                Ok(w)
            }
        }
    }

    fn push_model(&mut self, mut m: LocalModel2) -> usize {
        let id = self.res.models.len();
        m.id = id;
        self.res.models.push(m);
        id
    }

    /// Blows up the next non-transverse point. Returns false when nothing is left.
    pub fn step(&mut self) -> Result<bool, ResolveError> {
        let Some(center_id) = self.pending.pop_front() else { return Ok(false) };
        if self.res.divisors.len() >= MAX_BLOWUPS {
            return Err(ResolveError::BlowupLimit(MAX_BLOWUPS));
        }
        let center = self.res.models[center_id].clone();
        let g = &center.germ;
        if g.is_monomial() && g.order().unwrap_or(0) >= 2 && (center.u_exp > 0 || center.v_exp > 0) {
            return Err(ResolveError::NonIsolated(format!("strict transform {g} is a monomial")));
        }
        let (p, q) = self.next_weights(g)?;
        let bl = blowup_2d(&center.quotient, (p, q))?;
        let d = center.quotient.group_order()? as i64;
        let nu = g.w_order(&[p, q])?;
        let n = p * center.u_exp + q * center.v_exp + nu;
        let e = bl.e;
        if n % e != 0 {
            return Err(ResolveError::Internal(format!("multiplicity {n}/{e} is not integral")));
        }
        let m = n / e;
        let id = self.res.divisors.len();
        let dpq = d * p * q;

        // Earlier divisors through the center lose mu^2/(dpq) of self-intersection.
        if let Some(du) = center.u_div {
            self.res.divisors[du].self_intersection -= ratio(p * p, dpq);
        }
        if let Some(dv) = center.v_div {
            self.res.divisors[dv].self_intersection -= ratio(q * q, dpq);
        }
        if let (Some(du), Some(dv)) = (center.u_div, center.v_div) {
            self.res.edges.remove(&(du.min(dv), du.max(dv)));
        }
        for dold in [center.u_div, center.v_div].into_iter().flatten() {
            self.res.edges.insert((dold, id));
        }
        self.mark_blown_up(&center, id);

        let g1 = g.strict_transform((p as u32, q as u32), 1)?.1.root_substitute(0, e as u32)?;
        let g2 = g.strict_transform((p as u32, q as u32), 2)?.1.root_substitute(1, e as u32)?;
        let [c1, c2] = &bl.charts;
        let model1 = LocalModel2 {
            id: 0,
            quotient: c1.quotient.clone(),
            u_div: Some(id),
            u_exp: m,
            v_div: center.v_div,
            v_exp: center.v_exp,
            germ: g1.clone(),
            origin: ModelOrigin::ChartOrigin { divisor: id, chart: 1 },
        };
        let model2 = LocalModel2 {
            id: 0,
            quotient: c2.quotient.clone(),
            u_div: center.u_div,
            u_exp: center.u_exp,
            v_div: Some(id),
            v_exp: m,
            germ: g2.clone(),
            origin: ModelOrigin::ChartOrigin { divisor: id, chart: 2 },
        };
        let mut points = Vec::new();
        for (chart, model, var, other) in [(1u8, model1, 1usize, center.v_div), (2, model2, 0, center.u_div)] {
            let order = model.quotient.group_order()? as i64;
            let axis = model.germ.eval_var(1 - var, &Rat::zero());
            let local = match axis.min_degree_in(var) {
                Some(k) if model.passes() => ratio(i64::from(k), order),
                _ => Rat::zero(),
            };
            let crossing = model.crossing();
            let mid = self.push_model(model);
            let status = match crossing {
                Crossing::Off => PointStatus::Free,
                Crossing::Transverse => {
                    self.res.arrows.push(id);
                    PointStatus::Transverse
                }
                Crossing::NonTransverse => {
                    self.pending.push_back(mid);
                    PointStatus::Free
                }
            };
            points.push(PointOnDivisor {
                kind: PointKind::ChartOrigin(chart),
                status,
                model: Some(mid),
                other_divisor: other,
                local_int: local,
            });
        }

        // Open part of the divisor: u = 0, v != 0 in chart 1.
        let r = c1.quotient.multiplicity_l(1);
        let axis = g1.eval_var(0, &Rat::zero()).to_univariate(1).expect("univariate in v");
        let (_, stripped) = axis.strip_t_power();
        let mut w_coeffs = Vec::new();
        for (j, c) in stripped.coeffs().iter().enumerate() {
            if j as i64 % r == 0 {
                w_coeffs.push(c.clone());
            } else if !c.is_zero() {
                return Err(ResolveError::Internal(format!("g(0, v) is not semi-invariant of order {r}")));
            }
        }
        let big_g = UPoly::new(w_coeffs);
        if big_g.degree().unwrap_or(0) > 0 {
            for (phi, k) in factor_univariate(&big_g).factors {
                let deg = phi.degree().expect("nonconstant factor");
                let mut pt = PointOnDivisor {
                    kind: PointKind::Open {
                        factor: WPoly::from_univariate(1, 0, &phi).to_string_with(&["W"]),
                        orbits: deg,
                        multiplicity: k,
                    },
                    status: PointStatus::Transverse,
                    model: None,
                    other_divisor: None,
                    local_int: Rat::from_integer(k.into()),
                };
                if k == 1 {
                    self.res.arrows.extend(std::iter::repeat_n(id, deg));
                } else {
                    if deg != 1 {
                        return Err(ResolveError::NonRationalCenter(format!(
                            "multiple point on E{} at the roots of {}",
                            id + 1,
                            WPoly::from_univariate(1, 0, &phi).to_string_with(&["W"])
                        )));
                    }
                    let w0 = -phi.coeff(0);
                    let v0 = rational_nth_root(&w0, r as u32).ok_or_else(|| {
                        ResolveError::NonRationalCenter(format!("v^{r} = {w0} on E{} has no rational root", id + 1))
                    })?;
                    let model = LocalModel2 {
                        id: 0,
                        quotient: QuotientType::trivial(2),
                        u_div: Some(id),
                        u_exp: m,
                        v_div: None,
                        v_exp: 0,
                        germ: g1.translate(1, &v0),
                        origin: ModelOrigin::OpenPoint { divisor: id, v0 },
                    };
                    let mid = self.push_model(model);
                    self.pending.push_back(mid);
                    pt.model = Some(mid);
                    pt.status = PointStatus::Free;
                }
                points.push(pt);
            }
        }

        let info = DivisorInfo2D {
            id,
            center: center_id,
            weights: (p, q),
            nu,
            e,
            center_order: d,
            multiplicity: m,
            self_intersection: -ratio(e * e, dpq),
            charts: [c1.quotient.clone(), c2.quotient.clone()],
            open_orbit_order: r,
            points,
            strict_intersection: ratio(e * nu, dpq),
        };
        self.res.divisors.push(info);
        let worst = self.pending.iter().filter_map(|&i| self.res.models[i].germ.order()).max().unwrap_or(0);
        self.res.complexity.push((worst, self.pending.len()));
        Ok(true)
    }

    /// Records on the parent divisor that the point at `center` was blown up into `id`.
    fn mark_blown_up(&mut self, center: &LocalModel2, id: DivId) {
        let parent = match center.origin {
            ModelOrigin::Root => return,
            ModelOrigin::ChartOrigin { divisor, .. } | ModelOrigin::OpenPoint { divisor, .. } => divisor,
        };
        for pt in &mut self.res.divisors[parent].points {
            if pt.model == Some(center.id) {
                pt.status = PointStatus::BlownUp(id);
            }
        }
    }

    /// Runs to completion and assembles strata.
    pub fn finish(mut self) -> Result<CurveResolution, ResolveError> {
        while self.step()? {}
        let mut res = self.res;
        res.strata = curve_strata(&res);
        Ok(res)
    }
}

/// Resolves `h` at the origin.
pub fn resolve_curve(h: &WPoly, strategy: Strategy) -> Result<CurveResolution, ResolveError> {
    CurveResolver::new(h, strategy)?.finish()
}

/// Strata of every exceptional divisor with Euler characteristics and multiplicities.
pub fn curve_strata(res: &CurveResolution) -> Vec<Stratum2D> {
    let mut out = Vec::new();
    for dv in &res.divisors {
        let m = dv.multiplicity;
        out.push(Stratum2D {
            divisor: dv.id,
            kind: StratumKind::One,
            chi: -(dv.open_orbits() as i64),
            multiplicity: Some(m as u64),
        });
        for (chart, kind, var) in [(1u8, StratumKind::X, 0usize), (2, StratumKind::Y, 1)] {
            let pt = dv.origin_point(chart);
            let empty = pt.other_divisor.is_none() && pt.status == PointStatus::Free && {
                let model = &res.models[pt.model.expect("origin model")];
                !model.passes()
            };
            let l = dv.charts[(chart - 1) as usize].multiplicity_l(var);
            out.push(Stratum2D {
                divisor: dv.id,
                kind,
                chi: i64::from(empty),
                multiplicity: (m % l == 0).then(|| (m / l) as u64),
            });
        }
    }
    out
}

/// Characteristic polynomial of the monodromy of the resolved germ.
pub fn curve_charpoly(res: &CurveResolution) -> CharProduct {
    res.charpoly()
}

/// Milnor number `-1 + Σ m χ` over the strata, negated for curves.
pub fn curve_milnor(res: &CurveResolution) -> i64 {
    res.milnor()
}

impl CurveResolution {
    /// `(m, chi)` pairs for A'Campo: every open stratum, plus chart origins with nonzero
    /// Euler characteristic. Empty exactly when there is no divisor.
    pub fn acampo_strata(&self) -> Vec<(u64, i64)> {
        self.strata
            .iter()
            .filter(|s| s.chi != 0 || s.kind == StratumKind::One)
            .map(|s| (s.multiplicity.expect("nonempty strata have integral multiplicity"), s.chi))
            .collect()
    }

    /// Characteristic polynomial of the monodromy.
    pub fn charpoly(&self) -> CharProduct {
        acampo(&self.acampo_strata(), 1)
    }

    /// Milnor number from the stratum sum.
    pub fn milnor(&self) -> i64 {
        milnor_from_strata(&self.acampo_strata(), 1)
    }

    pub fn divisor(&self, id: DivId) -> &DivisorInfo2D {
        &self.divisors[id]
    }

    /// Strata of one divisor, in the order `1, x, y`.
    pub fn strata_of(&self, id: DivId) -> Vec<&Stratum2D> {
        self.strata.iter().filter(|s| s.divisor == id).collect()
    }

    /// DOT rendering of the dual graph; with `plus`, strict-transform branches as arrows.
    /// Divisors are labelled `E1, E2, ...` in creation order.
    pub fn to_dot(&self, plus: bool) -> String {
        let mut s = String::from("graph resolution {\n");
        for dv in &self.divisors {
            let _ = writeln!(
                s,
                "  E{} [label=\"E{}: ({},{}) ν={} m={} self={}\"];",
                dv.id + 1, dv.id + 1, dv.weights.0, dv.weights.1, dv.nu, dv.multiplicity, dv.self_intersection
            );
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  E{} -- E{};", a + 1, b + 1);
        }
        if plus {
            for (i, a) in self.arrows.iter().enumerate() {
                let _ = writeln!(s, "  C{i} [shape=point];\n  E{} -- C{i} [style=dashed];", a + 1);
            }
        }
        s.push_str("}\n");
        s
    }

    /// Checks that the resolution has Q-normal crossings at every recorded point.
    pub fn is_resolved(&self) -> bool {
        self.divisors.iter().all(|dv| {
            dv.points.iter().all(|pt| match (pt.status, pt.model) {
                (PointStatus::BlownUp(_), _) => true,
                (_, Some(mid)) => self.models[mid].crossing() != Crossing::NonTransverse,
                (_, None) => matches!(pt.kind, PointKind::Open { multiplicity: 1, .. }),
            })
        }) && (self.divisors.is_empty() == (self.models[0].crossing() != Crossing::NonTransverse))
    }

    /// Divisors that leave no trace in the A'Campo product: for every stratum multiplicity
    /// the Euler characteristics of their strata cancel. The blow-up of a node is one; the
    /// weight choice does not try to avoid them.
    pub fn inert_divisors(&self) -> Vec<DivId> {
        self.divisors
            .iter()
            .map(|dv| dv.id)
            .filter(|&id| {
                let mut by_mult: BTreeMap<Option<u64>, i64> = BTreeMap::new();
                for s in self.strata.iter().filter(|s| s.divisor == id) {
                    *by_mult.entry(s.multiplicity).or_default() += s.chi;
                }
                by_mult.values().all(|&chi| chi == 0)
            })
            .collect()
    }

    /// True when the dual graph is a forest.
    pub fn dual_graph_is_acyclic(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.divisors.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn wp(s: &str) -> WPoly {
        WPoly::parse(s, 2).unwrap()
    }

    #[test]
    fn newton_weight_examples() {
        assert_eq!(newton_weights(&wp("x^3 + y^2")), Ok((2, 3)));
        assert_eq!(newton_weights(&wp("x^2 + y^2")), Ok((1, 1)));
        assert_eq!(newton_weights(&wp("x^5 + x^2*y^2 + y^6")), Ok((2, 3)));
        assert_eq!(newton_weights(&wp("x*y + x^2*y^2")), Ok((1, 1)));
        assert!(matches!(newton_weights(&wp("x^2*y")), Err(ResolveError::NonIsolated(_))));
    }

    #[test]
    fn cusp_single_blowup() {
        let res = resolve_curve(&wp("x^3 + y^2"), Strategy::Auto).unwrap();
        assert_eq!(res.divisors.len(), 1);
        let e1 = &res.divisors[0];
        assert_eq!((e1.weights, e1.nu, e1.multiplicity), ((2, 3), 6, 6));
        assert_eq!(e1.self_intersection, ratio(-1, 6));
        let strata: Vec<(StratumKind, i64, Option<u64>)> =
            res.strata.iter().map(|s| (s.kind, s.chi, s.multiplicity)).collect();
        assert_eq!(
            strata,
            vec![(StratumKind::One, -1, Some(6)), (StratumKind::X, 1, Some(3)), (StratumKind::Y, 1, Some(2))]
        );
        assert_eq!(res.charpoly().expand().unwrap(), [1, -1, 1].map(crate::Int::from).to_vec());
        assert_eq!(res.milnor(), 2);
        assert!(res.is_resolved());
    }

    #[test]
    fn nt_locus_after_one_cusp_blowup_is_empty() {
        let mut r = CurveResolver::new(&wp("x^3 + y^2"), Strategy::Auto).unwrap();
        assert_eq!(r.nt_locus().len(), 1);
        assert!(r.step().unwrap());
        assert!(r.nt_locus().is_empty());
    }

    #[test]
    fn unresolved_tangency_is_in_nt_locus() {
        // One (1,1) blow-up of the tacnode leaves a tangency on the open part of E.
        let mut r = CurveResolver::new(&wp("y^2 - x^4"), Strategy::Script(vec![(1, 1), (1, 1)])).unwrap();
        r.step().unwrap();
        let nt = r.nt_locus();
        assert_eq!(nt.len(), 1);
        assert!(nt[0].germ.order().unwrap() >= 2);
    }

    #[test]
    fn inert_divisor_of_a_node() {
        // After a (1,1) blow-up of a node every stratum has multiplicity 2 and the
        // Euler characteristics add up to that of P^1 minus two points.
        let node = resolve_curve(&wp("x^2 - y^2"), Strategy::Auto).unwrap();
        assert_eq!(node.inert_divisors(), vec![0]);
        let cusp = resolve_curve(&wp("x^3 + y^2"), Strategy::Auto).unwrap();
        assert!(cusp.inert_divisors().is_empty());
    }

    #[test]
    fn smooth_germ_needs_nothing() {
        let res = resolve_curve(&wp("x + y^3"), Strategy::Auto).unwrap();
        assert!(res.divisors.is_empty() && res.strata.is_empty());
        assert!(res.charpoly().is_one());
        assert_eq!(res.milnor(), 0);
    }

    #[test]
    fn torus_knot_multiplicities() {
        for (p, q) in [(2u32, 3u32), (2, 5), (3, 4), (3, 5)] {
            let res = resolve_curve(&wp(&format!("x^{p} + y^{q}")), Strategy::Auto).unwrap();
            assert_eq!(res.divisors.len(), 1);
            assert_eq!(res.divisors[0].multiplicity, i64::from(p * q));
        }
    }

    #[test]
    fn ordinary_triple_point() {
        let res = resolve_curve(&wp("x^2*y + y^3"), Strategy::Auto).unwrap();
        assert_eq!(res.divisors.len(), 1);
        assert_eq!(res.divisors[0].weights, (1, 1));
        assert_eq!(res.arrows.len(), 3);
        assert_eq!(res.milnor(), 4);
    }

    #[test]
    fn irrational_tangent_is_rejected() {
        // Two tangent branches y = (±sqrt 2) x + ... meet at an irrational point of E.
        let h = wp("(y^2 - 2*x^2)^2 + x^5");
        assert!(matches!(resolve_curve(&h, Strategy::Auto), Err(ResolveError::NonRationalCenter(_))));
    }

    #[test]
    fn script_exhaustion() {
        let h = wp("y^2 - x^4");
        assert_eq!(resolve_curve(&h, Strategy::Script(vec![(1, 1)])), Err(ResolveError::ScriptExhausted(1)));
        let res = resolve_curve(&h, Strategy::Script(vec![(1, 1), (1, 1)])).unwrap();
        assert_eq!(res.milnor(), 3);
    }

    #[test]
    fn non_reduced_germ_is_rejected() {
        assert!(matches!(resolve_curve(&wp("(y - x^2)^2"), Strategy::Auto), Err(ResolveError::NonIsolated(_))));
        assert_eq!(resolve_curve(&wp("1 + x"), Strategy::Auto).err(), Some(ResolveError::NotThroughOrigin));
    }

    #[test]
    fn multiplicity_recursion_holds() {
        // Every divisor multiplicity is (p A + q B + nu) / e at its center.
        for h in ["(y^2 - x^3)^2 - 4*x^5*y - x^7", "y^3 - x^5", "x^4 - y^4 + x^5", "y^2 - x^4 - x^5"] {
            let res = resolve_curve(&wp(h), Strategy::Auto).unwrap();
            for dv in &res.divisors {
                let c = &res.models[dv.center];
                let n = dv.weights.0 * c.u_exp + dv.weights.1 * c.v_exp + dv.nu;
                assert_eq!(n, dv.e * dv.multiplicity, "{h}");
                assert!(dv.self_intersection < rat(0));
            }
            assert!(res.dual_graph_is_acyclic());
            assert!(res.is_resolved());
        }
    }

    #[test]
    fn dot_labels() {
        let res = resolve_curve(&wp("x^3 + y^2"), Strategy::Auto).unwrap();
        let dot = res.to_dot(true);
        assert!(dot.contains("(2,3) ν=6 m=6 self=-1/6"));
        assert!(dot.contains("style=dashed"));
    }
}
