//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::time::{Duration, Instant};

use common::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use tfreduce::exact::{rational_to_f64, QMatrix, RatFun, Rational};
use tfreduce::manifold::{dphi, ParamKind, XStar};
use tfreduce::reduce::{
    build_parameterization, complex_balanced_reduced, compose_matrix, compute_r_via_l, decompose_p_mu, eigenvalue_consistency,
    inherited_first_integrals, l_matrix, lemma_ba_check, projection_q, reduce_with, reduced_system, reduced_system_numeric, sample_points,
    stability_analysis, ParamChoice, ReducePath, ReducedRhs, ReducedSystem, StabilityMethod, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use tfreduce::sim::{convergence_study, Window};
use tfreduce::system::FastSlowSystem;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { passed: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { passed: false, detail: detail.into() }
}

fn reduce(sys: &FastSlowSystem, choice: ParamChoice, hint: Option<Vec<Rational>>) -> Result<ReducedSystem, String> {
    let hint = hint.map(XStar::Exact);
    let (phi, _) = build_parameterization(sys, &choice, hint.as_ref()).map_err(|f| format!("{f:?}"))?;
    reduce_with(sys, &phi).map_err(|e| e.to_string())
}

fn same(rs: &ReducedSystem, want: &[RatFun]) -> bool {
    rs.rhs.as_exact().is_some_and(|got| got == want)
}

// 1. Closed forms at several rate constant assignments.
fn formula_reproduction() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut check = |label: &str, ok: Result<bool, String>| {
        checked += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => failures.push(format!("{label}: rhs differs")),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };
    let sets = rate_sets();
    for (i, k) in sets.iter().enumerate() {
        let sys = system(&example1_text(&k[0], &k[1], &k[2], &k[3]));
        check(
            &format!("example-1 set {i}"),
            reduce(&sys, ParamChoice::NonInteracting(Some(vec![2])), None).map(|rs| same(&rs, &example1_rhs(&k[0], &k[1], &k[2], &k[3]))),
        );
        let sys = system(&example2_text(&k[0], &k[1], &k[2]));
        check(
            &format!("example-2 set {i}"),
            reduce(&sys, ParamChoice::NonInteracting(Some(vec![2])), None).map(|rs| same(&rs, &example2_rhs(&k[0], &k[1], &k[2]))),
        );
        let kappa = [qi(1), qi(2), q(1, 3), q(3, 2)][i].clone();
        let sys = system(&example3_text(&kappa, &k[1], &k[2], &k[3]));
        check(&format!("example-3 set {i}"), reduce(&sys, ParamChoice::User, None).map(|rs| same(&rs, &example3_rhs(&kappa, &k[2], &k[3]))));
        let sys = system(&two_component_text(k, true));
        check(
            &format!("two-component (first x*) set {i}"),
            reduce(&sys, ParamChoice::ComplexBalanced, Some(two_component_xstar_a(k))).map(|rs| same(&rs, &two_component_rhs_a(k))),
        );
        check(
            &format!("two-component (second x*) set {i}"),
            reduce(&sys, ParamChoice::ComplexBalanced, Some(two_component_xstar_b(k))).map(|rs| same(&rs, &two_component_rhs_b(k))),
        );
        check(
            &format!("two-component (eliminate X2, X4, X5) set {i}"),
            reduce(&sys, ParamChoice::NonInteracting(Some(vec![1, 3, 4])), None).map(|rs| same(&rs, &two_component_rhs_b(k))),
        );
    }
    for (a, b, c) in [(qi(-1), qi(2), qi(-3)), (qi(-2), qi(3), q(-1, 2)), (q(-1, 3), qi(5), qi(-2))] {
        let sys = system(&oscillator_text(&a, &b, &c));
        check(&format!("oscillator a={a} b={b} c={c}"), reduce(&sys, ParamChoice::User, None).map(|rs| same(&rs, &oscillator_rhs(&a, &b, &c))));
    }
    if failures.is_empty() {
        pass(format!("{checked} reduced systems equal the closed forms exactly ({} rate sets)", sets.len()))
    } else {
        fail(failures.join("; "))
    }
}

// 2. Complex-balanced closed form against the via-L path.
fn closed_form_cross_oracle() -> Outcome {
    let sys = system(&fixture("example1.tfr"));
    let (phi, _) = match build_parameterization(&sys, &ParamChoice::ComplexBalanced, None) {
        Ok(p) => p,
        Err(e) => return fail(format!("example-1: {e:?}")),
    };
    if phi.monomial.as_ref().map(|m| m.x_star.clone()) != Some(XStar::Exact(vec![qi(1); 3])) {
        return fail("example-1: x* is not (1, 1, 1)");
    }
    let closed = match complex_balanced_reduced(&sys, &phi) {
        Ok(c) => c,
        Err(e) => return fail(format!("example-1 closed form: {e}")),
    };
    let via_l = compute_r_via_l(&phi, &l_matrix(&sys).expect("network")).and_then(|r| reduced_system(&sys, &phi, r, ReducePath::ViaL));
    match via_l {
        Ok(v) if v.rhs.as_exact() == closed.rhs.as_exact() && closed.rhs.as_exact().is_some() => {}
        Ok(_) => return fail("example-1: closed form differs from via-L"),
        Err(e) => return fail(format!("example-1 via-L: {e}")),
    }
    let k = &rate_sets()[1];
    let sys = system(&two_component_text(k, true));
    let (phi, _) = match build_parameterization(&sys, &ParamChoice::ComplexBalanced, None) {
        Ok(p) => p,
        Err(e) => return fail(format!("two-component: {e:?}")),
    };
    if phi.is_exact() {
        return fail("two-component: expected a floating x* for these rate constants");
    }
    let closed = match complex_balanced_reduced(&sys, &phi) {
        Ok(c) => c,
        Err(e) => return fail(format!("two-component closed form: {e}")),
    };
    if !matches!(closed.rhs, ReducedRhs::Numeric(_)) {
        return fail("two-component: closed form should be numeric");
    }
    let lf = sys.crn.as_ref().expect("network").l_f.to_q();
    let numeric = reduced_system_numeric(&sys, &phi, &lf);
    let mut worst: f64 = 0.0;
    for v in sample_points(3, DEFAULT_SAMPLES, DEFAULT_SEED) {
        let vf: Vec<f64> = v.iter().map(rational_to_f64).collect();
        let a = closed.rhs.eval_f64(&vf);
        let b = numeric.rhs.eval_f64(&vf);
        let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
    }
    if worst <= 1e-10 {
        pass(format!("example-1 exact equality; two-component max relative difference {worst:.2e} at 20 samples"))
    } else {
        fail(format!("two-component max relative difference {worst:.2e} > 1e-10"))
    }
}

// 3. Deficiency and ranks.
fn structural_numbers() -> Outcome {
    let tc = system(&fixture("two_component.tfr"));
    let dp = system(&fixture("dual_phosphorylation.tfr"));
    let (c, d) = (tc.crn.as_ref().unwrap(), dp.crn.as_ref().unwrap());
    let got = format!("two-component: deficiency {}, r {}, s {}; dual phosphorylation: deficiency {}", c.deficiency_fast, tc.r, tc.s, d.deficiency_fast);
    if c.deficiency_fast == 0 && tc.r == 3 && tc.s == 3 && d.deficiency_fast == 1 {
        pass(got)
    } else {
        fail(got)
    }
}

// 4. rank N = rank N_f forces v' = 0.
fn triviality() -> Outcome {
    let sys = system(&fixture("two_component_trivial.tfr"));
    let mut paths = Vec::new();
    for choice in [ParamChoice::Auto, ParamChoice::NonInteracting(None)] {
        match reduce(&sys, choice, None) {
            Ok(rs) if rs.trivial && rs.rhs.as_exact().is_some_and(|f| f.iter().all(RatFun::is_zero)) => paths.push(rs.path.as_str()),
            Ok(rs) => return fail(format!("{} path: rhs is not identically zero", rs.path.as_str())),
            Err(e) => return fail(e),
        }
    }
    pass(format!("rhs ≡ 0 exactly on paths {}", paths.join(", ")))
}

// 5. Exact invariants on random rate constants and sample points.
#[derive(Clone, Debug)]
struct Case {
    family: usize,
    k: Vec<Rational>,
    v: Vec<Rational>,
}

fn rat() -> impl Strategy<Value = Rational> {
    (1i64..=20, 1i64..=20).prop_map(|(p, d)| q(p, d))
}

fn case() -> impl Strategy<Value = Case> {
    (0usize..7, prop::collection::vec(rat(), 9), prop::collection::vec(rat(), 3)).prop_map(|(family, k, v)| Case { family, k, v })
}

fn family_system(c: &Case) -> (FastSlowSystem, ParamChoice, Option<Vec<Rational>>) {
    let k = &c.k;
    match c.family {
        0 => (system(&example1_text(&k[0], &k[1], &k[2], &k[3])), ParamChoice::NonInteracting(Some(vec![2])), None),
        1 => (system(&example2_text(&k[0], &k[1], &k[2])), ParamChoice::NonInteracting(Some(vec![2])), None),
        2 => (system(&example3_text(&k[0], &k[1], &k[2], &k[3])), ParamChoice::User, None),
        3 => (system(&two_component_text(k, true)), ParamChoice::ComplexBalanced, Some(two_component_xstar_a(k))),
        4 => (system(&two_component_text(k, true)), ParamChoice::NonInteracting(Some(vec![1, 3, 4])), None),
        5 => (system(&dual_text(k)), ParamChoice::NonInteracting(Some(vec![2, 3, 4])), None),
        _ => (system(&oscillator_text(&-&k[0], &k[1], &-&k[2])), ParamChoice::User, None),
    }
}

fn invariants(c: &Case) -> Result<(), TestCaseError> {
    let (sys, choice, hint) = family_system(c);
    let hint = hint.map(XStar::Exact);
    let (phi, _) = build_parameterization(&sys, &choice, hint.as_ref()).map_err(|e| TestCaseError::fail(format!("{e:?}")))?;
    let rs = reduce_with(&sys, &phi).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let f = phi.exact().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let s = phi.s();
    let dec = decompose_p_mu(&sys).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let d = dphi(&phi).unwrap();
    let r = match &rs.r {
        Some(r) => r.clone(),
        None => compute_r_via_l(&phi, &l_matrix(&sys).unwrap()).map_err(|e| TestCaseError::fail(e.to_string()))?,
    };
    prop_assert!(sys.h0.iter().all(|p| RatFun::compose_poly(p, f).is_zero()), "h0 o Phi");
    prop_assert!(r.mul(&d).unwrap().is_identity(), "R DPhi = I");
    prop_assert!(r.mul(&compose_matrix(&dec.p, f, s)).unwrap().is_zero(), "R P = 0");
    let dr = d.mul(&r).unwrap();
    prop_assert!(dr.mul(&dr).unwrap() == dr, "DPhi R idempotent");
    let rhs = rs.rhs.as_exact().unwrap();
    prop_assert!(inherited_first_integrals(&sys.conservation, f, rhs).is_ok(), "first integrals");
    let v = &c.v[..s];
    let x = phi.eval_exact(v).ok_or_else(|| TestCaseError::fail("pole"))?;
    let qm = projection_q(&dec, &x).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(qm.mul(&qm).unwrap() == qm, "Q idempotent");
    prop_assert!(qm.mul(&dec.p.eval_at(&x)).unwrap().is_zero(), "Q P = 0");
    prop_assert_eq!(qm.rank(), s, "rank Q");
    Ok(())
}

fn lemma_case() -> impl Strategy<Value = (usize, usize, Vec<i64>, Vec<i64>)> {
    (2usize..6)
        .prop_flat_map(|n| (Just(n), 1..=n))
        .prop_flat_map(|(n, s)| (Just(n), Just(s), prop::collection::vec(-5i64..=5, n * s), prop::collection::vec(-5i64..=5, n * s)))
}

fn lemma(n: usize, s: usize, a: &[i64], c: &[i64]) -> Result<(), TestCaseError> {
    let am = QMatrix::from_i64_rows(&a.chunks(s).map(|r| r.to_vec()).collect::<Vec<_>>(), s);
    let cm = QMatrix::from_i64_rows(&c.chunks(n).map(|r| r.to_vec()).collect::<Vec<_>>(), n);
    prop_assume!(am.rank() == s);
    // Moore-Penrose left inverse, and the oblique one through C when C A is invertible.
    let at = am.transpose();
    let pinv = at.mul(&am).unwrap().inverse().unwrap().mul(&at).unwrap();
    prop_assert_eq!(lemma_ba_check(&am, &pinv), Ok(true));
    if let Ok(inv) = cm.mul(&am).unwrap().inverse() {
        let b = inv.mul(&cm).unwrap();
        prop_assert_eq!(lemma_ba_check(&am, &b), Ok(true));
    }
    Ok(())
}

fn invariant_suite() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    if let Err(e) = runner.run(&case(), |c| invariants(&c)) {
        return fail(format!("reduction invariants: {e}"));
    }
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    if let Err(e) = runner.run(&lemma_case(), |(n, s, a, c)| lemma(n, s, &a, &c)) {
        return fail(format!("lemma BA: {e}"));
    }
    pass("1000 random models and points, 1000 random left inverses: zero failures")
}

// 6. A(Phi(v)) and Hurwitz tests.
fn stability() -> Outcome {
    for k in rate_sets() {
        let sys = system(&example1_text(&k[0], &k[1], &k[2], &k[3]));
        let (phi, _) = build_parameterization(&sys, &ParamChoice::NonInteracting(Some(vec![2])), None).unwrap();
        let dec = decompose_p_mu(&sys).unwrap();
        let st = stability_analysis(&sys, &dec, &phi, DEFAULT_SAMPLES, DEFAULT_SEED);
        let x = Vars { s: 2 };
        let want = -(x.k(&k[0]) * (x.v(1) + x.v(2)) + x.k(&k[1]));
        match &st.a_matrix {
            Some(a) if a.shape() == (1, 1) && a[(0, 0)] == want.0 => {}
            _ => return fail(format!("example-1 A(Phi(v)) differs for k = {k:?}")),
        }
    }
    let sys = system(&fixture("dual_phosphorylation.tfr"));
    let (phi, _) = build_parameterization(&sys, &ParamChoice::NonInteracting(Some(vec![2, 3, 4])), None).unwrap();
    let dec = decompose_p_mu(&sys).unwrap();
    let st = stability_analysis(&sys, &dec, &phi, DEFAULT_SAMPLES, DEFAULT_SEED);
    let hurwitz_ok = st.method == StabilityMethod::RouthHurwitz
        && st.hurwitz.len() == 20
        && st.hurwitz.iter().all(|h| h.len() == 3 && h.iter().all(|d| *d > 0.0))
        && st.all_stable();
    if !hurwitz_ok {
        return fail("dual phosphorylation: Hurwitz determinants not positive at all 20 samples");
    }
    let mut compared = Vec::new();
    for name in ["example1.tfr", "example2.tfr", "two_component.tfr", "two_component_trivial.tfr"] {
        let sys = system(&fixture(name));
        let (phi, _) = build_parameterization(&sys, &ParamChoice::Auto, None).unwrap();
        let dec = decompose_p_mu(&sys).unwrap();
        let st = stability_analysis(&sys, &dec, &phi, DEFAULT_SAMPLES, DEFAULT_SEED);
        if st.shortcut.is_none() || st.method != StabilityMethod::RouthHurwitz {
            return fail(format!("{name}: shortcut and exact test did not both run"));
        }
        if !st.inconsistencies.is_empty() || !st.all_stable() {
            return fail(format!("{name}: {}", st.inconsistencies.join("; ")));
        }
        compared.push(name.trim_end_matches(".tfr"));
    }
    pass(format!("example-1 A exact for 4 rate sets; dual phosphorylation 20/20 Hurwitz; shortcut agrees on {}", compared.join(", ")))
}

// 7. Convergence along the epsilon ladder.
fn convergence() -> Outcome {
    let sys = system(&fixture("example1.tfr"));
    let (phi, _) = build_parameterization(&sys, &ParamChoice::Auto, None).unwrap();
    let rs = reduce_with(&sys, &phi).unwrap();
    let ladder = [0.04, 0.02, 0.01, 0.005];
    let window = Window { tau_min: Some(0.1), tau_max: 5.0 };
    let res = match convergence_study(&sys, &rs, &[1.0, 2.0], None, &ladder, window, 1e-10) {
        Ok(r) => r,
        Err(e) => return fail(format!("integration failed: {e}")),
    };
    let errors: Vec<String> = res.errors.iter().map(|e| format!("{e:.3e}")).collect();
    let ratios: Vec<String> = res.ratios.iter().map(|r| format!("{r:.3}")).collect();
    let detail = format!("errors [{}], ratios [{}]", errors.join(", "), ratios.join(", "));
    let in_band = res.ratios.iter().all(|r| (0.3..=0.75).contains(r));
    if res.monotone && in_band {
        pass(detail)
    } else if res.monotone {
        fail(format!("soft failure, errors decrease but a ratio leaves [0.3, 0.75]: {detail}"))
    } else {
        fail(detail)
    }
}

// 8. Spectrum of Dh0 on Z.
fn eigenvalue_consistency_all() -> Outcome {
    let mut worst: f64 = 0.0;
    let names = [
        "example1.tfr",
        "example2.tfr",
        "example3.tfr",
        "oscillator.tfr",
        "two_component.tfr",
        "two_component_trivial.tfr",
        "dual_phosphorylation.tfr",
    ];
    for name in names {
        let sys = system(&fixture(name));
        let choice = if sys.user_phi.is_some() { ParamChoice::User } else { ParamChoice::Auto };
        let (phi, _) = build_parameterization(&sys, &choice, None).unwrap();
        if phi.kind == ParamKind::Monomial && !phi.is_exact() {
            return fail(format!("{name}: unexpected floating reference point"));
        }
        let dec = decompose_p_mu(&sys).unwrap();
        let ec = eigenvalue_consistency(&sys, &dec, &phi, DEFAULT_SAMPLES, DEFAULT_SEED);
        if ec.distances.len() != 20 || !ec.passed {
            return fail(format!("{name}: distances {:?}", ec.distances));
        }
        worst = worst.max(ec.distances.iter().cloned().fold(0.0, f64::max));
    }
    pass(format!("{} fixtures x 20 samples, max distance {worst:.2e}", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("formula reproduction", formula_reproduction, 10),
        ("closed-form cross-oracle", closed_form_cross_oracle, 5),
        ("structural numbers", structural_numbers, 60),
        ("triviality", triviality, 60),
        ("invariant suite", invariant_suite, 60),
        ("stability", stability, 60),
        ("Tikhonov convergence", convergence, 30),
        ("eigenvalue consistency", eigenvalue_consistency_all, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let took = start.elapsed();
        if took > Duration::from_secs(*limit) {
            out = fail(format!("{} (took {:.1} s, limit {limit} s)", out.detail, took.as_secs_f64()));
        }
        if !out.passed {
            failed += 1;
        }
        println!("{} criterion {}: {name}: {} [{:.2} s]", if out.passed { "PASS" } else { "FAIL" }, i + 1, out.detail, took.as_secs_f64());
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
