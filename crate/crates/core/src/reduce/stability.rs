use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use serde::Serialize;
use tfr_exact::{rational_to_f64, rf_det, Matrix, MultiPoly, PolyMatrix, QMatrix, RFMatrix, RatFun, Rational, Scalar};

use super::decompose::numeric_rank;
use super::{compose_matrix, sample_points, PMuDecomposition, ReduceError};
use crate::manifold::{dphi, Check, Parameterization};
use crate::numeric::{eigenvalues, multiset_distance};
use crate::system::{jacobian, FastSlowSystem};

/// `A(x) = D mu(x) P(x)`, `r x r`.
pub fn a_matrix(dec: &PMuDecomposition) -> PolyMatrix {
    dec.dmu().mul(&dec.p).expect("conformable")
}

/// `Q(x) = I - P A^-1 D mu` at a rational point.
pub fn projection_q(dec: &PMuDecomposition, x: &[Rational]) -> Result<QMatrix, ReduceError> {
    let n = dec.n();
    if x.len() != n {
        return Err(ReduceError::Invalid(format!("point has {} entries, expected {n}", x.len())));
    }
    let p = dec.p.eval_at(x);
    let dmu = dec.dmu().eval_at(x);
    let a = dmu.mul(&p).expect("conformable");
    let ainv = a.inverse().map_err(|_| ReduceError::SingularA)?;
    let corr = p.mul(&ainv).and_then(|m| m.mul(&dmu)).expect("conformable");
    Ok(Matrix::identity(n, Rational::zero()).sub(&corr).expect("square"))
}

/// Leading principal minors of the Hurwitz matrix of `a0 l^r + a1 l^(r-1) + ... + ar`,
/// `H_ij = a_(2j-i)` (1-based).
pub fn hurwitz_determinants(a: &[Rational]) -> Vec<Rational> {
    hurwitz_matrices(a).iter().map(|h| h.det().expect("square")).collect()
}

fn hurwitz_matrices<T: Scalar>(a: &[T]) -> Vec<Matrix<T>> {
    let r = a.len() - 1;
    let zero = a[0].zero_like();
    let coef = |k: i64| if k < 0 || k as usize > r { zero.clone() } else { a[k as usize].clone() };
    (1..=r)
        .map(|k| Matrix::from_fn(k, k, zero.clone(), |i, j| coef(2 * (j as i64 + 1) - (i as i64 + 1))))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityMethod {
    RouthHurwitz,
    Eigenvalues,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    /// `A(Phi(v))`, when `Phi` is exact.
    #[serde(skip)]
    pub a_matrix: Option<RFMatrix>,
    pub samples: Vec<Vec<f64>>,
    pub verdicts: Vec<Verdict>,
    pub method: StabilityMethod,
    /// Hurwitz determinants per sample (Routh-Hurwitz method only).
    pub hurwitz: Vec<Vec<f64>>,
    /// All characteristic and Hurwitz polynomials of `A(x)` have positive coefficients.
    pub global_certificate: bool,
    pub shortcut: Option<String>,
    pub inconsistencies: Vec<String>,
}

impl StabilityReport {
    pub fn all_stable(&self) -> bool {
        self.verdicts.iter().all(|v| *v == Verdict::Stable)
    }
}

fn classify(eigs: &[(f64, f64)], scale: f64) -> Verdict {
    let tol = 1e-9 * scale.max(1.0);
    let max_re = eigs.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    if max_re < -tol {
        Verdict::Stable
    } else if max_re > tol {
        Verdict::Unstable
    } else {
        Verdict::Marginal
    }
}

fn fnorm(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn positive_coefficients(f: &RatFun) -> bool {
    let pos = |p: &MultiPoly| !p.is_zero() && p.coefficients().all(Signed::is_positive);
    let neg = |p: &MultiPoly| !p.is_zero() && p.coefficients().all(Signed::is_negative);
    (pos(f.numer()) && pos(f.denom())) || (neg(f.numer()) && neg(f.denom()))
}

fn global_certificate(a: &PolyMatrix) -> bool {
    let r = a.nrows();
    if r == 0 || r > 4 {
        return false;
    }
    let cp: Vec<RatFun> = a.charpoly_poly().into_iter().map(RatFun::from_poly).collect();
    if !cp[1..].iter().all(positive_coefficients) {
        return false;
    }
    hurwitz_matrices(&cp).iter().all(|h| rf_det(h).map(|d| positive_coefficients(&d)).unwrap_or(false))
}

fn deficiency_shortcut(sys: &FastSlowSystem) -> Option<String> {
    let c = sys.crn.as_ref()?;
    (c.deficiency_fast == 0 && c.weakly_reversible_fast)
        .then(|| "fast subnetwork is weakly reversible with deficiency zero: nonzero eigenvalues of Dh0 have negative real part at positive points of Z".to_string())
}

/// Classifies `A(Phi(v))` at sampled `v`: exact Hurwitz determinants for
/// `r <= 4` and exact `Phi`, floating eigenvalues otherwise.
pub fn stability_analysis(sys: &FastSlowSystem, dec: &PMuDecomposition, phi: &Parameterization, samples: usize, seed: u64) -> StabilityReport {
    let ax = a_matrix(dec);
    let r = dec.r();
    let s = phi.s();
    let exact = phi.is_exact();
    let method = if exact && r <= 4 { StabilityMethod::RouthHurwitz } else { StabilityMethod::Eigenvalues };
    let a_matrix = phi.exact().ok().map(|f| compose_matrix(&ax, f, s));
    let points = sample_points(s, samples, seed);
    let mut report = StabilityReport {
        a_matrix,
        samples: Vec::new(),
        verdicts: Vec::new(),
        method,
        hurwitz: Vec::new(),
        global_certificate: global_certificate(&ax),
        shortcut: deficiency_shortcut(sys),
        inconsistencies: Vec::new(),
    };
    for v in &points {
        let vf: Vec<f64> = v.iter().map(rational_to_f64).collect();
        report.samples.push(vf.clone());
        let verdict = match (method, phi.eval_exact(v)) {
            (StabilityMethod::RouthHurwitz, Some(x)) => {
                let a = ax.eval_at(&x);
                let dets = hurwitz_determinants(&a.charpoly());
                report.hurwitz.push(dets.iter().map(rational_to_f64).collect());
                if dets.iter().all(Signed::is_positive) {
                    Verdict::Stable
                } else {
                    let af = crate::numeric::qmatrix_to_dmatrix(&a);
                    match classify(&eigenvalues(&af), fnorm(&af)) {
                        Verdict::Stable => Verdict::Marginal,
                        v => v,
                    }
                }
            }
            (StabilityMethod::RouthHurwitz, None) => {
                report.inconsistencies.push(format!("Phi has a pole at sample {vf:?}"));
                Verdict::Marginal
            }
            (StabilityMethod::Eigenvalues, _) => {
                let x = phi.eval_f64(&vf);
                let af = DMatrix::from_fn(r, r, |i, j| ax[(i, j)].eval_f64(&x));
                classify(&eigenvalues(&af), fnorm(&af))
            }
        };
        report.verdicts.push(verdict);
    }
    if report.shortcut.is_some() {
        for (k, v) in report.verdicts.iter().enumerate() {
            if *v != Verdict::Stable {
                report.inconsistencies.push(format!("deficiency-zero shortcut asserts stability but sample {} is {v:?}", k + 1));
            }
        }
    }
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct BlanketReport {
    pub checks: Vec<Check>,
    /// Eigenvalues of `A` have negative real part at every sample.
    pub tikhonov: bool,
    /// Eigenvalues of `A` have nonzero real part at every sample.
    pub fenichel: bool,
    /// Samples (1-based) where `A` is nearly singular.
    pub ill_conditioned: Vec<usize>,
    pub shortcut: Option<String>,
}

impl BlanketReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const COND_LIMIT: f64 = 1e8;

/// Rank of `Dh0` and regularity of `A` on sampled points of `Z`, plus the
/// eigenvalue conditions for attractivity and normal hyperbolicity.
pub fn blanket_hypothesis_report(sys: &FastSlowSystem, dec: &PMuDecomposition, phi: &Parameterization, samples: usize, seed: u64) -> BlanketReport {
    let r = dec.r();
    let jac = sys.jacobian_h0();
    let ax = a_matrix(dec);
    let points = sample_points(phi.s(), samples, seed);
    let mut rank_fail = Vec::new();
    let mut singular = Vec::new();
    let mut ill = Vec::new();
    let (mut tikhonov, mut fenichel) = (true, true);
    for (k, v) in points.iter().enumerate() {
        let vf: Vec<f64> = v.iter().map(rational_to_f64).collect();
        let xf = phi.eval_f64(&vf);
        let af = DMatrix::from_fn(r, r, |i, j| ax[(i, j)].eval_f64(&xf));
        match phi.eval_exact(v) {
            Some(x) => {
                if jac.eval_at(&x).rank() != r {
                    rank_fail.push(k + 1);
                }
                if ax.eval_at(&x).det().map(|d| d.is_zero()).unwrap_or(true) {
                    singular.push(k + 1);
                }
            }
            None if phi.is_exact() => {
                rank_fail.push(k + 1);
                singular.push(k + 1);
            }
            None => {
                let jf = DMatrix::from_fn(jac.nrows(), jac.ncols(), |i, j| jac[(i, j)].eval_f64(&xf));
                if numeric_rank(&jf) != r {
                    rank_fail.push(k + 1);
                }
                if numeric_rank(&af) != r {
                    singular.push(k + 1);
                }
            }
        }
        let sv = af.singular_values();
        let (hi, lo) = (sv.iter().cloned().fold(0.0, f64::max), sv.iter().cloned().fold(f64::INFINITY, f64::min));
        if r > 0 && (lo == 0.0 || hi / lo > COND_LIMIT) {
            ill.push(k + 1);
        }
        let eig = eigenvalues(&af);
        let tol = 1e-9 * fnorm(&af).max(1.0);
        if eig.iter().any(|e| e.0 >= -tol) {
            tikhonov = false;
        }
        if eig.iter().any(|e| e.0.abs() <= tol) {
            fenichel = false;
        }
    }
    let list = |v: &[usize], ok: &str| if v.is_empty() { ok.to_string() } else { format!("fails at samples {v:?}") };
    let checks = vec![
        Check::new("rank_dh0", rank_fail.is_empty(), list(&rank_fail, &format!("rank Dh0(Phi(v)) = {r} at all samples"))),
        Check::new("a_nonsingular", singular.is_empty(), list(&singular, "A(Phi(v)) nonsingular at all samples")),
        Check::new("a_well_conditioned", ill.is_empty(), list(&ill, "condition number of A below 1e8 at all samples")),
    ];
    BlanketReport { checks, tikhonov, fenichel, ill_conditioned: ill, shortcut: deficiency_shortcut(sys) }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenConsistency {
    /// Largest matching distance per sample.
    pub distances: Vec<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

/// Eigenvalues of `Dh0(x)` against those of `A(x)` plus `s` zeros at sampled `x = Phi(v)`.
pub fn eigenvalue_consistency(sys: &FastSlowSystem, dec: &PMuDecomposition, phi: &Parameterization, samples: usize, seed: u64) -> EigenConsistency {
    const TOL: f64 = 1e-8;
    let r = dec.r();
    let s = phi.s();
    let n = sys.n();
    let jac = sys.jacobian_h0();
    let ax = a_matrix(dec);
    let mut distances = Vec::new();
    let mut passed = true;
    for v in sample_points(s, samples, seed) {
        let x: Vec<f64> = match phi.eval_exact(&v) {
            Some(x) => x.iter().map(rational_to_f64).collect(),
            None => phi.eval_f64(&v.iter().map(rational_to_f64).collect::<Vec<_>>()),
        };
        let jf = DMatrix::from_fn(n, n, |i, j| jac[(i, j)].eval_f64(&x));
        let af = DMatrix::from_fn(r, r, |i, j| ax[(i, j)].eval_f64(&x));
        let mut want = eigenvalues(&af);
        want.extend(std::iter::repeat_n((0.0, 0.0), s));
        let d = multiset_distance(&eigenvalues(&jf), &want);
        let scale = fnorm(&jf).max(1.0);
        passed &= d <= TOL * scale;
        distances.push(d);
    }
    EigenConsistency { distances, tolerance: TOL, passed }
}

/// `Dh0(Phi(v)) D Phi(v) = 0` identically.
pub fn invariance_check(sys: &FastSlowSystem, phi: &Parameterization) -> Result<bool, ReduceError> {
    let f = phi.exact().map_err(|_| ReduceError::NotExact)?;
    let j = compose_matrix(&jacobian(&sys.h0), f, phi.s());
    Ok(j.mul(&dphi(phi)?).expect("conformable").is_zero())
}
