//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::cell::Cell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_integer::Integer;
use proptest::prelude::{prop, prop_assert_eq, prop_oneof, Just};
use proptest::strategy::Strategy as _;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use qres::{run, JobConfig};
use qres_core::intersection_theory::{bezout_exceptional, exc_self_int, exceptional_local_sum, pullback_coeff};
use qres_core::monodromy::CharProduct;
use qres_core::oracles::{classical_charpoly, milnor_jacobian};
use qres_core::quotient_kernel::blowup_2d;
use qres_core::surface_lifter::{lift_yls, verify_lift, SurfaceInput, SurfaceResolution, SurfaceStratumKind, VerifyReport};
use qres_core::{ratio, resolve_curve, BigInt, QuotientType, Rat, Strategy, WPoly};

type Outcome = Result<String, String>;

const CURVE_CORPUS: &[&str] = &[
    "x^3 + y^2",
    "x^5 + y^2",
    "x^4 + y^3",
    "x^5 + y^3",
    "x^2 - y^2",
    "x^2*y - y^3",
    "x^2*y + y^4",
    "(y^2 - x^3)*(y^2 + x^3)",
    "x^4 - y^4",
    "y^3 - x^5",
    "y^2 - x^4",
    "(y^2 - x^3)^2 - 4*x^5*y - x^7",
    "y^2 - x^4 - x^5",
    "x^5 + x^2*y^2 + y^6",
    "(y - x^2)*(y - 2*x^2)*(y + x^3)",
];

/// Projective surfaces whose tangent cones have only rational singular points.
const SURFACE_CORPUS: &[&str] = &[
    "y^2*z - x^3 + z^4",
    "y^2*z - x^3 + z^5",
    "y^2*z - x^3 + z^9",
    "y^2*z - x^2*(x + z) + z^4",
    "y^3*z - x^4 + z^6",
    "y^2*z^2 - x^4 + (x + y + z)^5",
    "x*y*(x - y)*z + (x + y + z)^5",
    "y^2*z^3 - x^5 + (x + y + z)^6",
    "(x*z - y^2)^3 + ((z - y)*(6*x - 5*y + z)*(2*x + 3*y + z))^2 + (x + y + z)^7",
];

struct CorpusSurface {
    name: String,
    lifted: SurfaceResolution,
    report: VerifyReport,
    /// Present only for projective surfaces, where the cone is a genuine plane curve.
    jacobian_mu_sum: Option<u64>,
}

fn wp(s: &str) -> WPoly {
    WPoly::parse(s, 2).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn corpus() -> &'static [CorpusSurface] {
    static CORPUS: OnceLock<Vec<CorpusSurface>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut out = Vec::new();
        for src in SURFACE_CORPUS {
            let doc = run(&JobConfig::surface(src)).unwrap_or_else(|e| panic!("{src}: {e}"));
            let lifted = doc.surface.expect("surface mode");
            let mu_sum = lifted.points.iter().map(|p| milnor_jacobian(&p.germ).expect("isolated")).sum();
            let report = verify_lift(&lifted).unwrap_or_else(|e| panic!("{src}: {e}"));
            out.push(CorpusSurface { name: src.to_string(), lifted, report, jacobian_mu_sum: Some(mu_sum) });
        }
        // Formal lifts of every curve germ, several gaps.
        for src in CURVE_CORPUS {
            for (m, k) in [(6, 1), (6, 2), (6, 3), (7, 4)] {
                let inp = SurfaceInput::from_germs(m, k, &[("P".into(), wp(src))], &Strategy::Auto).unwrap();
                let lifted = lift_yls(&inp).unwrap();
                let report = verify_lift(&lifted).unwrap_or_else(|e| panic!("{src}: {e}"));
                out.push(CorpusSurface { name: format!("{src} (m={m}, k={k})"), lifted, report, jacobian_mu_sum: None });
            }
        }
        out
    })
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn int_poly(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<BigInt> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    int_poly(&out)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let h = wp("x^3 + y^2");
    let res = resolve_curve(&h, Strategy::Auto).map_err(|e| e.to_string())?;
    ensure(res.divisors.len() == 1, || format!("{} blow-ups", res.divisors.len()))?;
    ensure(res.divisors[0].weights == (2, 3), || format!("weights {:?}", res.divisors[0].weights))?;
    let delta = res.charpoly();
    ensure(delta.expand().ok() == Some(int_poly(&[1, -1, 1])), || format!("Δ = {delta:?}"))?;
    let classical = classical_charpoly(&h).map_err(|e| e.to_string())?;
    ensure(classical.to_cyclotomic() == delta.to_cyclotomic(), || "classical oracle disagrees".into())?;
    ensure(res.milnor() == 2 && milnor_jacobian(&h) == Ok(2), || format!("µ = {}", res.milnor()))?;
    within(start, Duration::from_millis(100))?;
    Ok(format!("one (2,3) blow-up, Δ = t^2 - t + 1, µ = 2 in {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for (p, q) in [(2u64, 3u64), (2, 5), (3, 4), (3, 5)] {
        let h = wp(&format!("x^{p} + y^{q}"));
        let res = resolve_curve(&h, Strategy::Auto).map_err(|e| e.to_string())?;
        let want = CharProduct::from_pairs([(p * q, 1), (1, 1), (p, -1), (q, -1)]);
        ensure(res.charpoly().to_cyclotomic() == want.to_cyclotomic(), || format!("({p},{q}): Δ mismatch"))?;
        let jac = milnor_jacobian(&h).map_err(|e| e.to_string())?;
        let mu = (p - 1) * (q - 1);
        ensure(jac == mu && res.milnor() == mu as i64, || format!("({p},{q}): µ {} vs {jac}", res.milnor()))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("4 torus knots in {:?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    for src in CURVE_CORPUS {
        let h = wp(src);
        let res = resolve_curve(&h, Strategy::Auto).map_err(|e| format!("{src}: {e}"))?;
        let classical = classical_charpoly(&h).map_err(|e| format!("{src}: {e}"))?;
        let jac = milnor_jacobian(&h).map_err(|e| format!("{src}: {e}"))?;
        let q_path = res.charpoly();
        ensure(q_path.to_cyclotomic() == classical.to_cyclotomic(), || format!("{src}: Q-resolution vs classical"))?;
        ensure(q_path.degree() == jac as i64 && res.milnor() == jac as i64, || format!("{src}: µ vs Jacobian"))?;
    }
    Ok(format!("{} germs agree three ways", CURVE_CORPUS.len()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let doc = run(&JobConfig::surface("y^2*z - x^3 + z^4").verified()).map_err(|e| e.to_string())?;
    ensure(doc.m == Some(3) && doc.k == Some(1), || format!("(m, k) = ({:?}, {:?})", doc.m, doc.k))?;
    let s = doc.surface.as_ref().expect("surface mode");
    ensure(s.e0.multiplicity == 3 && s.e0.chi == 1, || format!("E0 = {:?}", s.e0))?;
    ensure(s.divisors.len() == 1, || format!("{} lifted divisors", s.divisors.len()))?;
    let e1 = &s.divisors[0];
    ensure(e1.weights == (2, 3, 6) && e1.multiplicity == 24, || format!("E1 {:?} m = {}", e1.weights, e1.multiplicity))?;
    let mut table: Vec<_> = e1.strata.iter().map(|st| (st.kind, st.chi, st.multiplicity)).collect();
    table.sort();
    let want = vec![
        (SurfaceStratumKind::One, 1, Some(24)),
        (SurfaceStratumKind::X, -1, Some(12)),
        (SurfaceStratumKind::Y, -1, Some(8)),
        (SurfaceStratumKind::XY, 1, Some(4)),
    ];
    ensure(table == want, || format!("strata {table:?}"))?;
    let delta = s.charpoly();
    let product = CharProduct::from_pairs([(3, 1), (4, 1), (24, 1), (1, -1), (12, -1), (8, -1)]);
    ensure(delta == product, || format!("Δ = {delta:?}"))?;
    ensure(delta.expand().ok() == Some(poly_mul(&[1, 1, 1], &[1, 0, 0, 0, -1, 0, 0, 0, 1])), || "expansion".into())?;
    let cusp_mu = milnor_jacobian(&wp("y^2 - x^3")).map_err(|e| e.to_string())?;
    ensure(s.milnor() == 10 && 10 == 8 + cusp_mu as i64, || format!("µ = {}", s.milnor()))?;
    ensure(delta == s.closed_form(), || "closed formula differs".into())?;
    ensure(!doc.verification_failed(), || "verification battery failed".into())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("E0 = 3, E1 = 24 (2,3,6), µ = 10 in {:?}", start.elapsed()))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let doc = run(&JobConfig::surface("y^2*z - x^3 + z^5").verified()).map_err(|e| e.to_string())?;
    ensure(doc.m == Some(3) && doc.k == Some(2), || format!("(m, k) = ({:?}, {:?})", doc.m, doc.k))?;
    let s = doc.surface.as_ref().expect("surface mode");
    let e1 = &s.divisors[0];
    ensure(e1.weights == (2, 3, 3) && e1.multiplicity == 15, || format!("E1 {:?} m = {}", e1.weights, e1.multiplicity))?;
    let want = poly_mul(&[1, 1, 1], &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1]);
    ensure(s.charpoly().expand().ok() == Some(want), || "Δ expansion".into())?;
    ensure(s.milnor() == 12 && s.charpoly() == s.closed_form(), || format!("µ = {}", s.milnor()))?;
    ensure(!doc.verification_failed(), || "verification battery failed".into())?;
    for k in 3..=6u64 {
        let src = format!("y^2*z - x^3 + z^{}", 3 + k);
        let doc = run(&JobConfig::surface(&src)).map_err(|e| format!("{src}: {e}"))?;
        let s = doc.surface.as_ref().expect("surface mode");
        let mu = 8 + 2 * k as i64;
        let degree = s.charpoly().expand().map_err(|e| e.to_string())?.len() as i64 - 1;
        ensure(doc.k == Some(k) && s.milnor() == mu && degree == mu, || format!("k = {k}: µ = {}", s.milnor()))?;
        ensure(s.charpoly() == s.closed_form(), || format!("k = {k}: closed formula differs"))?;
    }
    within(start, Duration::from_secs(2))?;
    Ok(format!("E1 = 15 (2,3,3), µ = 8 + 2k for k = 2..6 in {:?}", start.elapsed()))
}

fn criterion_6() -> Outcome {
    let mut compared = 0;
    for c in corpus() {
        let (m, k) = (c.lifted.m, c.lifted.k);
        ensure(c.report.passed(), || format!("{}: {:?}", c.name, c.report.mismatches))?;
        for chk in &c.report.divisors {
            let curve = &c.lifted.curves[chk.point];
            for &(kind, chi, mult) in &chk.strata {
                let want = match kind {
                    SurfaceStratumKind::XY if chk.divisor == 0 => (1, Some(m + k)),
                    SurfaceStratumKind::XY => (0, None),
                    _ => {
                        let cs = curve
                            .strata_of(chk.divisor)
                            .into_iter()
                            .find(|s| SurfaceStratumKind::from(s.kind) == kind)
                            .expect("curve stratum");
                        match cs.multiplicity {
                            Some(cm) if cs.chi != 0 => (-(k.gcd(&cm) as i64) * cs.chi, Some((m + k) * cm / k.gcd(&cm))),
                            _ => (0, None),
                        }
                    }
                };
                let got = (chi, if chi == 0 { None } else { mult });
                ensure(got == want, || format!("{}: E{} {kind:?}: chart {got:?}, formula {want:?}", c.name, chk.divisor + 1))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} chart strata match the closed formulas on {} surfaces", corpus().len()))
}

/// A normalized type `X(d; a, b)` with `d <= 12`.
fn normalized_type() -> impl proptest::strategy::Strategy<Value = (i64, i64, i64)> {
    (1i64..=12, 0i64..12, 0i64..12).prop_filter_map("units mod d", |(d, a, b)| {
        let (a, b) = (a % d, b % d);
        if d == 1 {
            return Some((1, 0, 0));
        }
        (a.gcd(&d) == 1 && b.gcd(&d) == 1).then_some((d, a, b))
    })
}

/// Semi-invariant germ of character `chi`, monomials of degree 1..=5.
fn germ((d, a, b): (i64, i64, i64), chi: i64, coeffs: &[i64]) -> Option<WPoly> {
    let mut terms = Vec::new();
    let mut idx = 0;
    for deg in 1u32..=5 {
        for j in 0..=deg {
            let i = deg - j;
            let c = coeffs[idx];
            idx += 1;
            if c != 0 && (a * i as i64 + b * j as i64 - chi).rem_euclid(d) == 0 {
                terms.push((vec![i, j], Rat::from_integer(c.into())));
            }
        }
    }
    let g = WPoly::from_terms(2, terms);
    (!g.is_zero()).then_some(g)
}

fn criterion_7() -> Outcome {
    let tested = Cell::new(0u32);
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 400, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let strategy = (
        normalized_type(),
        (1i64..=9, 1i64..=9).prop_filter("coprime", |(p, q)| p.gcd(q) == 1),
        0i64..12,
        prop::collection::vec(prop_oneof![2 => Just(0i64), 1 => -3i64..=3], 20),
    );
    let result = runner.run(&strategy, |(t, (p, q), chi, cs)| {
        let Some(c) = germ(t, chi, &cs[..]) else { return Ok(()) };
        let base = if t.0 == 1 { QuotientType::trivial(2) } else { QuotientType::cyclic(t.0, &[t.1, t.2]) };
        let bl = blowup_2d(&base, (p, q)).unwrap();
        let (d, e) = (t.0, bl.e);
        let nu = c.w_order(&[p, q]).unwrap();
        let e_sq = exc_self_int(d, p, q, e);
        prop_assert_eq!(&e_sq, &ratio(-e * e, d * p * q));
        // The coordinate axes recover E^2 independently of the closed formula.
        for (axis, mult) in [(WPoly::var(2, 0), p), (WPoly::var(2, 1), q)] {
            prop_assert_eq!(-exceptional_local_sum(&bl, &axis).unwrap() * ratio(e, mult), e_sq.clone());
        }
        let local = exceptional_local_sum(&bl, &c).unwrap();
        prop_assert_eq!(&local, &bezout_exceptional(nu, d, (p, q), e));
        prop_assert_eq!(&local, &ratio(e * nu, d * p * q));
        prop_assert_eq!(local + pullback_coeff(nu, e) * e_sq, ratio(0, 1));
        tested.set(tested.get() + 1);
        Ok(())
    });
    result.map_err(|e| e.to_string())?;
    let n = tested.get();
    ensure(n >= 100, || format!("only {n} instances exercised"))?;
    Ok(format!("{n} randomized chart instances"))
}

fn criterion_8() -> Outcome {
    let mut compared = 0;
    for c in corpus() {
        for chk in c.report.divisors.iter().filter(|chk| chk.divisor != 0) {
            let curve = &c.lifted.curves[chk.point];
            for &(kind, chi, _) in chk.strata.iter().filter(|s| s.0 != SurfaceStratumKind::XY) {
                let cs = curve
                    .strata_of(chk.divisor)
                    .into_iter()
                    .find(|s| SurfaceStratumKind::from(s.kind) == kind)
                    .expect("curve stratum");
                ensure((chi != 0) == (cs.chi != 0), || {
                    format!("{}: E{} {kind:?}: surface χ {chi}, curve χ {}", c.name, chk.divisor + 1, cs.chi)
                })?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} strata on divisors a != 1 agree"))
}

fn criterion_9() -> Outcome {
    let mut surfaces = 0;
    for c in corpus() {
        let s = &c.lifted;
        let cyc = s.charpoly().to_cyclotomic();
        ensure(cyc.is_polynomial(), || format!("{}: negative cyclotomic exponent", c.name))?;
        if let Some(mu_sum) = c.jacobian_mu_sum {
            let m = s.m as i64;
            let want = m * m - 3 * m + 3 - mu_sum as i64;
            let got = s.charpoly().exponent(s.m);
            ensure(got == want, || format!("{}: exponent of (t^{m} - 1) is {got}, want {want}", c.name))?;
            surfaces += 1;
        }
    }
    Ok(format!("all {} products are polynomials; {surfaces} leading exponents match", corpus().len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
