//! Lift of plane-curve resolutions to superisolated (SIS) and Yomdin-Le (YLS) surfaces.
//!
//! For `f = f_m + f_{m+k} + ...` with tangent cone `C = V(f_m)` and
//! `Sing(C) ∩ V(f_{m+k}) = ∅`, blowing up the origin gives `E0 ≅ P²` with multiplicity
//! `m`; above each singular point `P` of `C` the surface looks like `z^k + h_P(x, y) = 0`
//! and every weighted blow-up of the curve resolution of `h_P` lifts to a space blow-up.
//! The lift only needs the curve data and `(m, k)`:
//!
//! - weights `(k p / g, k q / g, ν / g)` with `g = gcd(k, ν)`;
//! - multiplicity `(m + k) m_a / gcd(k, m_a)`;
//! - strata `χ = -gcd(k, m(ě)) χ(ě)`, `m = (m + k) m(ě) / gcd(k, m(ě))`, plus the point
//!   `[0:0:1]` of the first divisor with `(1, m + k)`.
//!
//! The [`verify`] submodule replays the blow-ups on explicit space charts and recomputes
//! the same records from group data.

mod verify;

use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::curve_resolver::{resolve_curve, DivId, ResolveError, StratumKind, Stratum2D, Strategy};
use crate::monodromy::{acampo, closed_yls, milnor_from_strata, CharProduct};
use crate::quotient_kernel::QuotientError;
use crate::wpoly::PolyError;
use crate::{CurveResolution, WPoly};

pub use verify::{verify_lift, DivisorCheck, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("invalid surface input: {0}")]
    InvalidInput(String),
    #[error("curve resolution failed at {label}: {source}")]
    Resolve {
        label: String,
        #[source]
        source: ResolveError,
    },
    #[error("chart replay not supported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A singular point of the tangent cone with its local germ and curve resolution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPoint {
    pub label: String,
    pub germ: WPoly,
    #[serde(skip)]
    pub resolution: CurveResolution,
    pub mu: u64,
}

/// Everything the lift consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceInput {
    pub m: u64,
    pub k: u64,
    pub points: Vec<SingularPoint>,
}

impl SurfaceInput {
    /// Resolves each germ and takes its Milnor number from the resolution.
    pub fn from_germs(m: u64, k: u64, germs: &[(String, WPoly)], strategy: &Strategy) -> Result<Self, LiftError> {
        let points = germs
            .iter()
            .map(|(label, germ)| {
                let resolution = resolve_curve(germ, strategy.clone())
                    .map_err(|source| LiftError::Resolve { label: label.clone(), source })?;
                let mu = u64::try_from(resolution.milnor()).expect("Milnor numbers are nonnegative");
                Ok(SingularPoint { label: label.clone(), germ: germ.clone(), resolution, mu })
            })
            .collect::<Result<Vec<_>, LiftError>>()?;
        Self::new(m, k, points)
    }

    pub fn new(m: u64, k: u64, points: Vec<SingularPoint>) -> Result<Self, LiftError> {
        if m < 2 {
            return Err(LiftError::InvalidInput(format!("tangent cone degree {m} < 2")));
        }
        if k < 1 {
            return Err(LiftError::InvalidInput("k must be at least 1".into()));
        }
        Ok(SurfaceInput { m, k, points })
    }

    pub fn mu_sum(&self) -> u64 {
        self.points.iter().map(|p| p.mu).sum()
    }
}

/// `χ(P² \ C) = m² - 3m + 3 - Σ µ_P` for a reduced curve of degree `m`.
pub fn chi_p2_complement(m: u64, mu_sum: u64) -> i64 {
    let m = m as i64;
    m * m - 3 * m + 3 - mu_sum as i64
}

/// Stratum labels on a lifted divisor: `xy` is the point `[0:0:1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SurfaceStratumKind {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "xy")]
    XY,
}

impl From<StratumKind> for SurfaceStratumKind {
    fn from(k: StratumKind) -> Self {
        match k {
            StratumKind::One => Self::One,
            StratumKind::X => Self::X,
            StratumKind::Y => Self::Y,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum3D {
    /// Index into [`SurfaceInput::points`].
    pub point: usize,
    pub divisor: DivId,
    pub kind: SurfaceStratumKind,
    pub chi: i64,
    /// `None` only when the stratum is empty and the quotient is not integral.
    pub multiplicity: Option<u64>,
    /// The curve stratum it comes from; `None` for `xy`.
    pub curve_chi: Option<i64>,
    pub curve_multiplicity: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E0Record {
    pub multiplicity: u64,
    pub chi: i64,
}

/// A lifted exceptional divisor `E_a^P`, isomorphic to `P²(weights) / G` with `G` the
/// group at the curve center.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisorInfo3D {
    pub point: usize,
    pub divisor: DivId,
    pub weights: (u64, u64, u64),
    pub multiplicity: u64,
    pub curve_weights: (i64, i64),
    pub curve_nu: i64,
    pub curve_multiplicity: u64,
    /// `gcd(k, m_a)`.
    pub k_a: u64,
    pub center_order: i64,
    pub strata: Vec<Stratum3D>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub label: String,
    pub germ: WPoly,
    pub mu: u64,
    pub curve_charpoly: CharProduct,
}

/// The lifted resolution of an SIS (`k = 1`) or YLS germ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceResolution {
    pub m: u64,
    pub k: u64,
    pub e0: E0Record,
    pub points: Vec<PointSummary>,
    pub divisors: Vec<DivisorInfo3D>,
    /// `(point, a, b)` for lifted divisors meeting along a curve; every lifted divisor
    /// also meets `E0`.
    pub edges: Vec<(usize, DivId, DivId)>,
    #[serde(skip)]
    pub curves: Vec<CurveResolution>,
}

fn lift_multiplicity(m: u64, k: u64, curve_m: u64) -> u64 {
    (m + k) * curve_m / k.gcd(&curve_m)
}

/// YLS strata of one curve resolution; `first` is the divisor of the initial blow-up,
/// the only one carrying a nonempty `xy` stratum.
pub fn strata_yls(curve: &[Stratum2D], first: DivId, m: u64, k: u64) -> Vec<Stratum3D> {
    let mut out: Vec<Stratum3D> = curve
        .iter()
        .map(|s| {
            let multiplicity = s.multiplicity.map(|cm| lift_multiplicity(m, k, cm));
            let chi = match s.multiplicity {
                Some(cm) if s.chi != 0 => -(k.gcd(&cm) as i64) * s.chi,
                _ => 0,
            };
            Stratum3D {
                point: 0,
                divisor: s.divisor,
                kind: s.kind.into(),
                chi,
                multiplicity,
                curve_chi: Some(s.chi),
                curve_multiplicity: s.multiplicity,
            }
        })
        .collect();
    let mut divisors: Vec<DivId> = curve.iter().map(|s| s.divisor).collect();
    divisors.dedup();
    for a in divisors {
        let first_one = a == first;
        out.push(Stratum3D {
            point: 0,
            divisor: a,
            kind: SurfaceStratumKind::XY,
            chi: i64::from(first_one),
            multiplicity: first_one.then_some(m + k),
            curve_chi: None,
            curve_multiplicity: None,
        });
    }
    out.sort_by_key(|s| (s.divisor, s.kind));
    out
}

/// SIS strata: the `k = 1` case, `χ(Ě) = -χ(ě)` and `m(Ě) = (m + 1) m(ě)`.
pub fn strata_sis(curve: &[Stratum2D], first: DivId, m: u64) -> Vec<Stratum3D> {
    strata_yls(curve, first, m, 1)
}

/// Lift for `k = 1`.
pub fn lift_sis(input: &SurfaceInput) -> Result<SurfaceResolution, LiftError> {
    if input.k != 1 {
        return Err(LiftError::InvalidInput(format!("superisolated lift needs k = 1, got {}", input.k)));
    }
    lift_yls(input)
}

/// Lift for any `k >= 1`.
pub fn lift_yls(input: &SurfaceInput) -> Result<SurfaceResolution, LiftError> {
    let (m, k) = (input.m, input.k);
    let mut divisors = Vec::new();
    let mut edges = Vec::new();
    let mut points = Vec::new();
    for (pi, sp) in input.points.iter().enumerate() {
        let res = &sp.resolution;
        points.push(PointSummary {
            label: sp.label.clone(),
            germ: sp.germ.clone(),
            mu: sp.mu,
            curve_charpoly: res.charpoly(),
        });
        let Some(first) = res.divisors.first().map(|d| d.id) else { continue };
        let mut strata = strata_yls(&res.strata, first, m, k);
        for s in &mut strata {
            s.point = pi;
        }
        for dv in &res.divisors {
            let (p, q) = dv.weights;
            let g = (k as i64).gcd(&dv.nu);
            let curve_m = dv.multiplicity as u64;
            divisors.push(DivisorInfo3D {
                point: pi,
                divisor: dv.id,
                weights: ((k as i64 * p / g) as u64, (k as i64 * q / g) as u64, (dv.nu / g) as u64),
                multiplicity: lift_multiplicity(m, k, curve_m),
                curve_weights: dv.weights,
                curve_nu: dv.nu,
                curve_multiplicity: curve_m,
                k_a: k.gcd(&curve_m),
                center_order: dv.center_order,
                strata: strata.iter().filter(|s| s.divisor == dv.id).cloned().collect(),
            });
        }
        edges.extend(res.edges.iter().map(|&(a, b)| (pi, a, b)));
    }
    Ok(SurfaceResolution {
        m,
        k,
        e0: E0Record { multiplicity: m, chi: chi_p2_complement(m, input.mu_sum()) },
        points,
        divisors,
        edges,
        curves: input.points.iter().map(|p| p.resolution.clone()).collect(),
    })
}

impl SurfaceResolution {
    pub fn strata(&self) -> impl Iterator<Item = &Stratum3D> {
        self.divisors.iter().flat_map(|d| d.strata.iter())
    }

    /// `(m, χ)` pairs for A'Campo: `E0` and every stratum with nonzero Euler characteristic.
    pub fn acampo_strata(&self) -> Vec<(u64, i64)> {
        let mut out = vec![(self.e0.multiplicity, self.e0.chi)];
        out.extend(
            self.strata()
                .filter(|s| s.chi != 0)
                .map(|s| (s.multiplicity.expect("nonempty strata have integral multiplicity"), s.chi)),
        );
        out
    }

    pub fn charpoly(&self) -> CharProduct {
        acampo(&self.acampo_strata(), 2)
    }

    pub fn milnor(&self) -> i64 {
        milnor_from_strata(&self.acampo_strata(), 2)
    }

    /// The closed formula `(t^m - 1)^χ / (t - 1) ∏ Δ_P^k(t^{m+k})` on the same data.
    pub fn closed_form(&self) -> CharProduct {
        let deltas: Vec<CharProduct> = self.points.iter().map(|p| p.curve_charpoly.clone()).collect();
        closed_yls(self.e0.chi, self.m, self.k, &deltas)
    }

    /// `(m - 1)^3 + k Σ µ_P`.
    pub fn milnor_closed(&self) -> i64 {
        let m = self.m as i64;
        (m - 1).pow(3) + self.k as i64 * self.points.iter().map(|p| p.mu as i64).sum::<i64>()
    }

    /// DOT rendering of the divisor adjacency graph, `E0` included; lifted divisors are
    /// labelled `E1, E2, ...` like their curve counterparts.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph surface {\n");
        let _ = writeln!(s, "  E0 [label=\"E0: m={} χ={}\"];", self.e0.multiplicity, self.e0.chi);
        for d in &self.divisors {
            let (p, q, r) = d.weights;
            let _ = writeln!(
                s,
                "  P{}E{} [label=\"{} E{}: ({},{},{}) m={}\"];",
                d.point,
                d.divisor + 1,
                self.points[d.point].label,
                d.divisor + 1,
                p,
                q,
                r,
                d.multiplicity
            );
            let _ = writeln!(s, "  E0 -- P{}E{};", d.point, d.divisor + 1);
        }
        for (pt, a, b) in &self.edges {
            let _ = writeln!(s, "  P{pt}E{} -- P{pt}E{};", a + 1, b + 1);
        }
        s.push_str("}\n");
        s
    }
}
