use nalgebra::{DMatrix, DVector};
use tfr_exact::{rational_to_f64, Matrix, MultiPoly, RFMatrix, RatFun};

use crate::manifold::{dphi, verify_parameterization, Check, Parameterization};
use crate::numeric::CompiledField;
use crate::reduce::{
    blanket_hypothesis_report, compose_matrix, compute_r_general, compute_r_graph_case, compute_r_via_l, decompose_p_mu, eigenvalue_consistency,
    inherited_first_integrals, invariance_check, l_matrix, lemma_ba_check_rf, projection_q, reduce_with, sample_points, stability_analysis,
    PMuDecomposition, ReducedSystem,
};
use crate::system::FastSlowSystem;

const NUMERIC_TOL: f64 = 1e-9;

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check::new(name, passed, detail)
}

fn ok_or_fail(name: &str, passed: bool, ok: &str, fail: &str) -> Check {
    check(name, passed, if passed { ok } else { fail })
}

/// Every invariant the reduction should satisfy for `phi`, as named pass/fail
/// rows: the parameterization itself, the defining conditions of `R`, the
/// projection `Q`, agreement of the available `R` constructions, inherited
/// first integrals, the lemma `BA = I`, and the sampled blanket hypotheses.
pub fn invariant_suite(sys: &FastSlowSystem, phi: &Parameterization, samples: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let pr = verify_parameterization(phi, &sys.h0, sys.s, samples, seed);
    for c in &pr.checks {
        let name = match c.name.as_str() {
            "on_manifold" => "h0∘Φ ≡ 0",
            "generic_rank" => "rank DΦ = s",
            "point_rank" => "rank DΦ(v) = s at samples",
            "positivity" if !sys.is_crn() => continue,
            "positivity" => "Φ(v) > 0 at samples",
            other => other,
        };
        out.push(check(name, c.passed, c.detail.clone()));
    }
    if !pr.checks.first().is_some_and(|c| c.passed) {
        return out;
    }
    let dec = match decompose_p_mu(sys) {
        Ok(d) => d,
        Err(e) => {
            out.push(check("h0 = P·μ", false, e.to_string()));
            return out;
        }
    };
    out.push(check("h0 = P·μ", true, format!("r = {}", dec.r())));
    let rs = match reduce_with(sys, phi) {
        Ok(rs) => {
            out.push(check("reduction", true, format!("path {}", rs.path.as_str())));
            Some(rs)
        }
        Err(e) => {
            out.push(check("reduction", false, e.to_string()));
            None
        }
    };
    if phi.is_exact() {
        exact_checks(sys, phi, &dec, rs.as_ref(), samples, seed, &mut out);
    } else {
        numeric_checks(sys, phi, &dec, rs.as_ref(), samples, seed, &mut out);
    }
    let b = blanket_hypothesis_report(sys, &dec, phi, samples, seed);
    for c in &b.checks {
        let name = match c.name.as_str() {
            "rank_dh0" => "rank Dh0(Φ(v)) = r",
            "a_nonsingular" => "A(Φ(v)) nonsingular",
            "a_well_conditioned" => "A(Φ(v)) well conditioned",
            other => other,
        };
        out.push(check(name, c.passed, c.detail.clone()));
    }
    let ec = eigenvalue_consistency(sys, &dec, phi, samples, seed);
    let worst = ec.distances.iter().cloned().fold(0.0, f64::max);
    out.push(check("σ(Dh0) = σ(A) ∪ {0}^s", ec.passed, format!("max distance {worst:.3e}")));
    let st = stability_analysis(sys, &dec, phi, samples, seed);
    out.push(check(
        "stability verdicts consistent",
        st.inconsistencies.is_empty(),
        if st.inconsistencies.is_empty() { format!("{} samples", st.verdicts.len()) } else { st.inconsistencies.join("; ") },
    ));
    out
}

fn exact_checks(
    sys: &FastSlowSystem,
    phi: &Parameterization,
    dec: &PMuDecomposition,
    rs: Option<&ReducedSystem>,
    samples: usize,
    seed: u64,
    out: &mut Vec<Check>,
) {
    let f = phi.exact().expect("exact");
    let s = phi.s();
    let d = dphi(phi).expect("exact");
    out.push(match invariance_check(sys, phi) {
        Ok(ok) => ok_or_fail("Dh0(Φ)·DΦ ≡ 0", ok, "identically", "nonzero"),
        Err(e) => check("Dh0(Φ)·DΦ ≡ 0", false, e.to_string()),
    });
    let pphi = compose_matrix(&dec.p, f, s);
    let mut candidates: Vec<(&str, RFMatrix)> = Vec::new();
    if let Some(r) = rs.and_then(|r| r.r.clone()) {
        candidates.push((rs.expect("present").path.as_str(), r));
    }
    if let Some(l) = l_matrix(sys) {
        if let Ok(r) = compute_r_via_l(phi, &l) {
            candidates.push(("via_L", r));
        }
    }
    match compute_r_general(phi, dec) {
        Ok(r) => candidates.push(("general", r)),
        Err(e) => out.push(check("general R", false, e.to_string())),
    }
    if let Ok(gc) = compute_r_graph_case(phi, dec) {
        candidates.push((if gc.qss { "qss" } else { "graph_case" }, gc.r));
    }
    let Some((_, r)) = candidates.first().cloned() else {
        out.push(check("R·DΦ = I_s", false, "no R could be computed"));
        return;
    };
    let rd = r.mul(&d).expect("conformable");
    out.push(ok_or_fail("R·DΦ = I_s", rd.is_identity(), "identically", "differs from identity"));
    out.push(ok_or_fail("R·P = 0", r.mul(&pphi).expect("conformable").is_zero(), "identically", "nonzero"));
    let dr = d.mul(&r).expect("conformable");
    out.push(ok_or_fail("(DΦ·R)² = DΦ·R", dr.mul(&dr).expect("square") == dr, "identically", "not idempotent"));
    out.push(match lemma_ba_check_rf(&d, &r) {
        Ok(ok) => ok_or_fail("lemma BA = I_s", ok, "B = R, A = DΦ", "BA differs from identity"),
        Err(e) => check("lemma BA = I_s", false, e.to_string()),
    });
    let h1phi: Vec<RatFun> = sys.h1.iter().map(|p| RatFun::compose_poly(p, f)).collect();
    let rhs_of = |r: &RFMatrix| r.mul_vec(&h1phi).expect("conformable");
    let reference = rhs_of(&r);
    let mut names = Vec::new();
    let mut agree = true;
    for (name, other) in &candidates[1..] {
        names.push(*name);
        agree &= rhs_of(other) == reference;
    }
    if let Some(rs) = rs {
        names.push(rs.path.as_str());
        agree &= rs.rhs.as_exact().is_some_and(|e| e == reference.as_slice());
    }
    names.sort_unstable();
    names.dedup();
    out.push(ok_or_fail(
        "reduction paths agree",
        agree,
        &format!("{} against {}", names.join(", "), candidates[0].0),
        &format!("rhs differs among {}", names.join(", ")),
    ));
    out.push(match inherited_first_integrals(&sys.conservation, f, &reference) {
        Ok(fi) => check("D(ψ∘Φ)·rhs ≡ 0", true, format!("{} conservation laws", fi.len())),
        Err(e) => check("D(ψ∘Φ)·rhs ≡ 0", false, e.to_string()),
    });
    if rs.is_some_and(|r| r.trivial) {
        out.push(ok_or_fail("rank N = rank N_f ⇒ rhs ≡ 0", reference.iter().all(RatFun::is_zero), "rhs is zero", "rhs is not zero"));
    }
    let mut failures = Vec::new();
    for (k, v) in sample_points(s, samples, seed).iter().enumerate() {
        let Some(x) = phi.eval_exact(v) else {
            failures.push(format!("pole at sample {}", k + 1));
            continue;
        };
        match projection_q(dec, &x) {
            Ok(q) => {
                let px = dec.p.eval_at(&x);
                let q2 = q.mul(&q).expect("square");
                if q2 != q || !q.mul(&px).expect("conformable").is_zero() || q.rank() != s {
                    failures.push(format!("sample {}", k + 1));
                }
            }
            Err(e) => failures.push(format!("sample {}: {e}", k + 1)),
        }
    }
    out.push(check(
        "Q² = Q, Q·P = 0, rank Q = s",
        failures.is_empty(),
        if failures.is_empty() { format!("{samples}/{samples} samples") } else { failures.join("; ") },
    ));
}

fn dm(m: &Matrix<MultiPoly>, x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].eval_f64(x))
}

fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = b.iter().chain(a.iter()).fold(1.0f64, |m, x| m.max(x.abs()));
    (a - b).iter().fold(0.0f64, |m, x| m.max(x.abs())) / scale
}

fn numeric_checks(
    sys: &FastSlowSystem,
    phi: &Parameterization,
    dec: &PMuDecomposition,
    rs: Option<&ReducedSystem>,
    samples: usize,
    seed: u64,
    out: &mut Vec<Check>,
) {
    let s = phi.s();
    let n = phi.n();
    let Some(l) = l_matrix(sys) else {
        out.push(check("R·DΦ = I_s", false, "no L for a numeric parameterization"));
        return;
    };
    let h1 = CompiledField::new(&sys.h1);
    let dmu = dec.dmu();
    let (mut worst_rd, mut worst_rp, mut worst_q, mut worst_rhs) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for v in sample_points(s, samples, seed) {
        let vf: Vec<f64> = v.iter().map(rational_to_f64).collect();
        let x = phi.eval_f64(&vf);
        let d = phi.jacobian_f64(&vf);
        let lx = dm(&l, &x);
        let Some(inv) = (&lx * &d).try_inverse() else {
            worst_rd = f64::INFINITY;
            continue;
        };
        let r = inv * &lx;
        let p = dm(&dec.p, &x);
        worst_rd = worst_rd.max(rel_err(&(&r * &d), &DMatrix::identity(s, s)));
        worst_rp = worst_rp.max((&r * &p).amax() / p.amax().max(1.0));
        let mu = dm(&dmu, &x);
        if let Some(ainv) = (&mu * &p).try_inverse() {
            let q = DMatrix::identity(n, n) - &p * ainv * &mu;
            worst_q = worst_q.max(rel_err(&(&q * &q), &q));
        } else {
            worst_q = f64::INFINITY;
        }
        if let Some(rs) = rs {
            let want = &r * DVector::from_vec(h1.eval(&x));
            let got = DVector::from_vec(rs.rhs.eval_f64(&vf));
            worst_rhs = worst_rhs.max((got - &want).amax() / want.amax().max(1e-300));
        }
    }
    out.push(check("R·DΦ = I_s", worst_rd < NUMERIC_TOL, format!("max relative deviation {worst_rd:.3e}")));
    out.push(check("R·P = 0", worst_rp < NUMERIC_TOL, format!("max relative entry {worst_rp:.3e}")));
    out.push(check("Q² = Q", worst_q < NUMERIC_TOL, format!("max relative deviation {worst_q:.3e}")));
    if rs.is_some() {
        out.push(check("reduction paths agree", worst_rhs < NUMERIC_TOL, format!("max relative difference {worst_rhs:.3e}")));
    }
}
