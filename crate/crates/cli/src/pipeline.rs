//! The end-to-end job: parse, resolve, lift, assemble the monodromy and verify.

use std::fmt::Write as _;

use num_integer::Integer;
use qres_core::curve_resolver::{DivId, DivisorInfo2D, ResolveError, Stratum2D};
use qres_core::monodromy::{milnor, CharProduct, CyclotomicVector, MonodromyError};
use qres_core::oracles::{classical_charpoly, milnor_jacobian};
use qres_core::surface_lifter::{lift_yls, verify_lift, LiftError, SingularPoint, SurfaceInput, SurfaceResolution};
use qres_core::wpoly::{PolyError, UPoly};
use qres_core::{resolve_curve, CurveResolution, Rat, Strategy, WPoly};
use serde::Serialize;
use thiserror::Error;

use crate::cone::{check_condition, detect_mk, given_points, sing_points, ConeError, ConePoint, ProjPoint};

#[derive(Debug, Error)]
pub enum JobError {
    #[error("cannot parse {what}: {source}")]
    Parse {
        what: String,
        #[source]
        source: PolyError,
    },
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("{label}: {source}")]
    Resolve {
        label: String,
        #[source]
        source: ResolveError,
    },
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error("invalid job: {0}")]
    Invalid(String),
}

impl JobError {
    /// Process exit code: 2 for inputs outside the rational-center scope, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Cone(ConeError::IrrationalPoint(_)) => 2,
            JobError::Resolve { source: ResolveError::NonRationalCenter(_), .. } => 2,
            JobError::Lift(LiftError::Resolve { source: ResolveError::NonRationalCenter(_), .. }) => 2,
            JobError::Lift(LiftError::Unsupported(_)) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Curve,
    Surface,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermSpec {
    pub germ: String,
    pub mu: Option<u64>,
}

/// Exactly one input source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JobInput {
    /// A plane germ in curve mode, a space germ `f(x, y, z)` in surface mode.
    Polynomial(String),
    /// Local germs of the tangent cone at its singular points, with explicit `(m, k)`.
    Germs { m: u64, k: u64, germs: Vec<GermSpec> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobConfig {
    pub mode: Mode,
    pub input: JobInput,
    /// Singular points to use instead of searching for them.
    pub sing: Vec<ProjPoint>,
    /// Blow-up weights for curve mode, consumed in processing order.
    pub weights: Option<Vec<(i64, i64)>>,
    pub verify: bool,
}

impl JobConfig {
    pub fn curve(poly: &str) -> Self {
        JobConfig {
            mode: Mode::Curve,
            input: JobInput::Polynomial(poly.into()),
            sing: Vec::new(),
            weights: None,
            verify: false,
        }
    }

    pub fn surface(poly: &str) -> Self {
        JobConfig { mode: Mode::Surface, ..Self::curve(poly) }
    }

    pub fn verified(mut self) -> Self {
        self.verify = true;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointDocument {
    pub label: String,
    pub germ: String,
    pub mu: u64,
    pub charpoly: String,
    pub divisors: Vec<DivisorInfo2D>,
    pub strata: Vec<Stratum2D>,
    pub edges: Vec<(DivId, DivId)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl Verification {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(CheckResult { name: name.into(), passed, detail: detail.into() });
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultDocument {
    pub mode: Mode,
    pub input: String,
    pub m: Option<u64>,
    pub k: Option<u64>,
    pub points: Vec<PointDocument>,
    pub surface: Option<SurfaceResolution>,
    pub delta_factored: String,
    pub delta_cyclotomic: String,
    pub delta_expanded: String,
    pub milnor: i64,
    pub verification: Option<Verification>,
    #[serde(skip)]
    pub charpoly: CharProduct,
    #[serde(skip)]
    pub curves: Vec<CurveResolution>,
}

impl ResultDocument {
    pub fn verification_failed(&self) -> bool {
        self.verification.as_ref().is_some_and(|v| !v.passed)
    }

    /// DOT for every curve resolution (with strict-transform arrows) and the surface graph.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        for (doc, curve) in self.points.iter().zip(&self.curves) {
            let _ = writeln!(s, "// {}: {}", doc.label, doc.germ);
            s.push_str(&curve.to_dot(true));
        }
        if let Some(surface) = &self.surface {
            s.push_str(&surface.to_dot());
        }
        s
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match (self.m, self.k) {
            (Some(m), Some(k)) => {
                let _ = writeln!(s, "surface {}: m = {m}, k = {k}", self.input);
            }
            _ => {
                let _ = writeln!(s, "curve {}", self.input);
            }
        }
        for p in &self.points {
            let _ = writeln!(s, "  {}: germ {}, µ = {}, Δ = {}", p.label, p.germ, p.mu, p.charpoly);
        }
        if let Some(surface) = &self.surface {
            let _ = writeln!(s, "  E0: m = {}, χ = {}", surface.e0.multiplicity, surface.e0.chi);
            for d in &surface.divisors {
                let (p, q, r) = d.weights;
                let _ = writeln!(
                    s,
                    "  {} E{}: weights ({p},{q},{r}), m = {}",
                    surface.points[d.point].label,
                    d.divisor + 1,
                    d.multiplicity
                );
            }
        }
        let _ = writeln!(s, "Δ factored:   {}", self.delta_factored);
        let _ = writeln!(s, "Δ cyclotomic: {}", self.delta_cyclotomic);
        let _ = writeln!(s, "Δ expanded:   {}", self.delta_expanded);
        let _ = writeln!(s, "µ = {}", self.milnor);
        if let Some(v) = &self.verification {
            let failed: Vec<&CheckResult> = v.checks.iter().filter(|c| !c.passed).collect();
            let _ = writeln!(s, "verification: {} ({} checks)", if v.passed { "PASS" } else { "FAIL" }, v.checks.len());
            for c in failed {
                let _ = writeln!(s, "  FAIL {}: {}", c.name, c.detail);
            }
        }
        s
    }
}

pub fn format_cyclotomic(c: &CyclotomicVector) -> String {
    let parts: Vec<String> = c
        .entries()
        .map(|(d, e)| if e == 1 { format!("Φ{d}") } else { format!("Φ{d}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

fn format_expanded(cp: &CharProduct) -> Result<String, MonodromyError> {
    let coeffs: Vec<Rat> = cp.expand()?.into_iter().map(Rat::from_integer).collect();
    Ok(UPoly::new(coeffs).to_string())
}

fn parse(src: &str, nvars: usize, what: &str) -> Result<WPoly, JobError> {
    WPoly::parse(src, nvars).map_err(|source| JobError::Parse { what: format!("{what} '{src}'"), source })
}

fn point_document(label: String, germ: &WPoly, res: &CurveResolution, mu: u64) -> PointDocument {
    PointDocument {
        label,
        germ: germ.to_string(),
        mu,
        charpoly: res.charpoly().to_string(),
        divisors: res.divisors.clone(),
        strata: res.strata.clone(),
        edges: res.edges.iter().copied().collect(),
    }
}

/// Q-resolution vs classical resolution vs Jacobian algebra for one germ.
fn curve_checks(v: &mut Verification, label: &str, germ: &WPoly, res: &CurveResolution) {
    let cp = res.charpoly();
    match classical_charpoly(germ) {
        Ok(classical) => v.push(
            format!("{label}: Q-resolution vs classical Δ"),
            classical.to_cyclotomic() == cp.to_cyclotomic(),
            format!("{cp} vs {classical}"),
        ),
        Err(e) => v.push(format!("{label}: classical Δ"), false, e.to_string()),
    }
    match milnor_jacobian(germ) {
        Ok(mu) => v.push(
            format!("{label}: µ vs Jacobian algebra"),
            res.milnor() == mu as i64 && cp.degree() == mu as i64,
            format!("strata {}, degree {}, Jacobian {mu}", res.milnor(), cp.degree()),
        ),
        Err(e) => v.push(format!("{label}: Jacobian algebra"), false, e.to_string()),
    }
    v.push(format!("{label}: Δ is a polynomial"), cp.to_cyclotomic().is_polynomial(), cp.to_string());
}

fn strategy(job: &JobConfig) -> Strategy {
    job.weights.clone().map_or(Strategy::Auto, Strategy::Script)
}

fn run_curve(job: &JobConfig) -> Result<ResultDocument, JobError> {
    let JobInput::Polynomial(src) = &job.input else {
        return Err(JobError::Invalid("curve mode takes a single polynomial".into()));
    };
    let germ = parse(src, 2, "curve")?;
    let res = resolve_curve(&germ, strategy(job))
        .map_err(|source| JobError::Resolve { label: "origin".into(), source })?;
    let cp = res.charpoly();
    let mu = milnor(&cp)?;
    let verification = job.verify.then(|| {
        let mut v = Verification { passed: true, checks: Vec::new() };
        curve_checks(&mut v, "origin", &germ, &res);
        v
    });
    Ok(ResultDocument {
        mode: Mode::Curve,
        input: src.clone(),
        m: None,
        k: None,
        points: vec![point_document("origin".into(), &germ, &res, mu as u64)],
        surface: None,
        delta_factored: cp.to_string(),
        delta_cyclotomic: format_cyclotomic(&cp.to_cyclotomic()),
        delta_expanded: format_expanded(&cp)?,
        milnor: mu,
        verification,
        charpoly: cp,
        curves: vec![res],
    })
}

fn resolve_point(label: String, germ: WPoly, mu: Option<u64>) -> Result<SingularPoint, JobError> {
    let resolution = resolve_curve(&germ, Strategy::Auto)
        .map_err(|source| JobError::Resolve { label: label.clone(), source })?;
    let mu = mu.unwrap_or_else(|| resolution.milnor() as u64);
    Ok(SingularPoint { label, germ, resolution, mu })
}

fn run_surface(job: &JobConfig) -> Result<ResultDocument, JobError> {
    let (input_echo, m, k, points) = match &job.input {
        JobInput::Polynomial(src) => {
            let f = parse(src, 3, "surface")?;
            let (m, k) = detect_mk(&f)?;
            if m < 2 {
                return Err(ConeError::Smooth.into());
            }
            let fm = f.homogeneous_part(m as u32);
            let cone: Vec<ConePoint> =
                if job.sing.is_empty() { sing_points(&fm)? } else { given_points(&fm, &job.sing)? };
            check_condition(&f.homogeneous_part((m + k) as u32), &cone)?;
            let points = cone
                .into_iter()
                .map(|c| resolve_point(c.point.to_string(), c.germ, None))
                .collect::<Result<Vec<_>, _>>()?;
            (src.clone(), m, k, points)
        }
        JobInput::Germs { m, k, germs } => {
            let points = germs
                .iter()
                .enumerate()
                .map(|(i, g)| resolve_point(format!("P{}", i + 1), parse(&g.germ, 2, "germ")?, g.mu))
                .collect::<Result<Vec<_>, _>>()?;
            let echo: Vec<&str> = germs.iter().map(|g| g.germ.as_str()).collect();
            (format!("germs {}", echo.join(", ")), *m, *k, points)
        }
    };
    let input = SurfaceInput::new(m, k, points)?;
    let lifted = lift_yls(&input)?;
    let cp = lifted.charpoly();
    // Under --verify a non-polynomial product (e.g. a wrong supplied µ) is reported as a
    // failed check instead of aborting the job.
    let (mu, expanded) = match (milnor(&cp), format_expanded(&cp)) {
        (Ok(mu), Ok(e)) => (mu, e),
        (Err(e), _) | (_, Err(e)) if !job.verify => return Err(e.into()),
        (_, Err(e)) | (Err(e), _) => (cp.degree(), format!("({e})")),
    };

    let verification = if job.verify {
        let mut v = Verification { passed: true, checks: Vec::new() };
        for p in &input.points {
            curve_checks(&mut v, &p.label, &p.germ, &p.resolution);
            let computed = p.resolution.milnor() as u64;
            v.push(format!("{}: supplied µ", p.label), computed == p.mu, format!("{} vs {computed}", p.mu));
        }
        let closed = lifted.closed_form();
        v.push("A'Campo vs closed formula", closed == cp, format!("{cp} vs {closed}"));
        v.push(
            "Milnor number vs (m-1)^3 + kΣµ",
            mu == lifted.milnor_closed() && mu == lifted.milnor(),
            format!("{mu} vs {}", lifted.milnor_closed()),
        );
        let cyc = cp.to_cyclotomic();
        v.push("Δ is a polynomial", cyc.is_polynomial(), format_cyclotomic(&cyc));
        v.push(
            "exponent of (t^m - 1) is χ(P² \\ C)",
            cp.exponent(m) == lifted.e0.chi,
            format!("{} vs {}", cp.exponent(m), lifted.e0.chi),
        );
        let report = verify_lift(&lifted)?;
        v.push(
            "chart replay of the lift",
            report.passed(),
            if report.passed() { format!("{} checks", report.checks) } else { report.mismatches.join("; ") },
        );
        let contributes = lifted.divisors.iter().flat_map(|d| &d.strata).all(|s| match s.curve_chi {
            Some(c) => (s.chi != 0) == (c != 0),
            None => true,
        });
        v.push("contributing strata match the curve", contributes, "");
        let gcd_ok = lifted.divisors.iter().all(|d| d.k_a == k.gcd(&d.curve_multiplicity));
        v.push("k_a = gcd(k, m_a)", gcd_ok, "");
        Some(v)
    } else {
        None
    };

    Ok(ResultDocument {
        mode: Mode::Surface,
        input: input_echo,
        m: Some(m),
        k: Some(k),
        points: input
            .points
            .iter()
            .map(|p| point_document(p.label.clone(), &p.germ, &p.resolution, p.mu))
            .collect(),
        delta_factored: cp.to_string(),
        delta_cyclotomic: format_cyclotomic(&cp.to_cyclotomic()),
        delta_expanded: expanded,
        milnor: mu,
        verification,
        charpoly: cp,
        curves: input.points.iter().map(|p| p.resolution.clone()).collect(),
        surface: Some(lifted),
    })
}

/// Runs a job. Verification only appends a report; the primary outputs do not depend on it.
pub fn run(job: &JobConfig) -> Result<ResultDocument, JobError> {
    match job.mode {
        Mode::Curve => run_curve(job),
        Mode::Surface => run_surface(job),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_curve() {
        let doc = run(&JobConfig::curve("x^3 + y^2").verified()).unwrap();
        assert_eq!(doc.milnor, 2);
        assert_eq!(doc.delta_expanded, UPoly::new([1, -1, 1].map(qres_core::rat).to_vec()).to_string());
        assert!(!doc.verification_failed());
    }

    #[test]
    fn sis_cusp_surface() {
        let doc = run(&JobConfig::surface("y^2*z - x^3 + z^4").verified()).unwrap();
        assert_eq!((doc.m, doc.k, doc.milnor), (Some(3), Some(1), 10));
        assert!(!doc.verification_failed(), "{}", doc.to_text());
    }

    #[test]
    fn verification_is_read_only() {
        let plain = run(&JobConfig::surface("y^2*z - x^3 + z^5")).unwrap();
        let checked = run(&JobConfig::surface("y^2*z - x^3 + z^5").verified()).unwrap();
        assert_eq!(plain.delta_expanded, checked.delta_expanded);
        assert_eq!(plain.milnor, checked.milnor);
        assert_eq!(plain.surface, checked.surface);
        assert_eq!(checked.milnor, 12);
    }

    #[test]
    fn condition_violation_is_an_error() {
        assert!(matches!(
            run(&JobConfig::surface("y^2*z - x^3 + x^4")),
            Err(JobError::Cone(ConeError::ConditionViolated(_)))
        ));
    }

    #[test]
    fn germ_input() {
        let job = JobConfig {
            mode: Mode::Surface,
            input: JobInput::Germs { m: 3, k: 2, germs: vec![GermSpec { germ: "y^2 - x^3".into(), mu: Some(2) }] },
            sing: Vec::new(),
            weights: None,
            verify: true,
        };
        let doc = run(&job).unwrap();
        assert_eq!(doc.milnor, 12);
        assert!(!doc.verification_failed());
    }

    #[test]
    fn scope_errors_exit_with_two() {
        let err = run(&JobConfig::surface("(x^2 - 2*z^2)^2 - y^2*z^2 + z^5")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
