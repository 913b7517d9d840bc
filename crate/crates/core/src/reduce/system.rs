use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use tfr_exact::{monomial_pow, rational_to_f64, rf_solve_linear, Matrix, MultiPoly, QMatrix, RFMatrix, RatFun};

use super::{inherited_first_integrals, FirstIntegral, ReduceError};
use crate::crn::int_rank;
use crate::manifold::{MonomialData, Parameterization};
use crate::numeric::{qmatrix_to_dmatrix, CompiledField, CompiledRatFun};
use crate::system::FastSlowSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReducePath {
    General,
    ViaL,
    GraphCase,
    Qss,
    ComplexBalanced,
}

impl ReducePath {
    pub fn as_str(self) -> &'static str {
        match self {
            ReducePath::General => "general",
            ReducePath::ViaL => "via_L",
            ReducePath::GraphCase => "graph_case",
            ReducePath::Qss => "qss",
            ReducePath::ComplexBalanced => "complex_balanced",
        }
    }
}

/// Floating evaluation of a reduced right-hand side with no exact form.
#[derive(Clone, Debug)]
pub enum NumericRhs {
    /// `diag(v) (L diag(Phi) L^T)^-1 L N_s (K_s o Phi^Y_s)`.
    ClosedForm { l: DMatrix<f64>, ns: DMatrix<f64>, k: Vec<f64>, ys: Vec<Vec<(usize, i32)>>, mono: MonomialData },
    /// `(L D Phi)^-1 L h1(Phi)` for constant `L`.
    ViaL { l: DMatrix<f64>, h1: CompiledField, phi: Parameterization },
}

impl NumericRhs {
    pub fn eval(&self, v: &[f64]) -> Vec<f64> {
        match self {
            NumericRhs::ClosedForm { l, ns, k, ys, mono } => {
                let x = mono.eval_f64(v);
                let w = DVector::from_iterator(
                    k.len(),
                    k.iter().zip(ys).map(|(kj, y)| kj * y.iter().map(|&(i, e)| x[i].powi(e)).product::<f64>()),
                );
                let m = l * DMatrix::from_diagonal(&DVector::from_column_slice(&x)) * l.transpose();
                let b = l * (ns * w);
                match m.lu().solve(&b) {
                    Some(y) => y.iter().zip(v).map(|(a, vi)| a * vi).collect(),
                    None => vec![f64::NAN; v.len()],
                }
            }
            NumericRhs::ViaL { l, h1, phi } => {
                let x = phi.eval_f64(v);
                let d = phi.jacobian_f64(v);
                let hx = DVector::from_vec(h1.eval(&x));
                match (l * d).lu().solve(&(l * hx)) {
                    Some(y) => y.iter().copied().collect(),
                    None => vec![f64::NAN; v.len()],
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum ReducedRhs {
    Exact { rhs: Vec<RatFun>, compiled: Vec<CompiledRatFun> },
    Numeric(NumericRhs),
}

impl ReducedRhs {
    pub fn exact(rhs: Vec<RatFun>) -> Self {
        let compiled = rhs.iter().map(CompiledRatFun::new).collect();
        ReducedRhs::Exact { rhs, compiled }
    }

    pub fn as_exact(&self) -> Option<&[RatFun]> {
        match self {
            ReducedRhs::Exact { rhs, .. } => Some(rhs),
            ReducedRhs::Numeric(_) => None,
        }
    }

    pub fn eval_f64(&self, v: &[f64]) -> Vec<f64> {
        match self {
            ReducedRhs::Exact { compiled, .. } => compiled.iter().map(|f| f.eval(v)).collect(),
            ReducedRhs::Numeric(n) => n.eval(v),
        }
    }

    /// Smallest denominator magnitude of the exact form (infinite for polynomials).
    pub fn min_denominator(&self, v: &[f64]) -> f64 {
        match self {
            ReducedRhs::Exact { rhs, compiled } => compiled
                .iter()
                .zip(rhs)
                .filter(|(_, f)| !f.is_polynomial())
                .map(|(c, _)| c.denominator(v).abs())
                .fold(f64::INFINITY, f64::min),
            ReducedRhs::Numeric(_) => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub rhs: ReducedRhs,
    /// `s x n`, when computed.
    pub r: Option<RFMatrix>,
    pub phi: Parameterization,
    pub path: ReducePath,
    pub first_integrals: Vec<FirstIntegral>,
    /// Fast part, kept for manifold residuals.
    pub h0: Vec<MultiPoly>,
    /// `rank N = rank N_f`.
    pub trivial: bool,
}

impl ReducedSystem {
    pub fn s(&self) -> usize {
        self.phi.s()
    }

    pub fn n(&self) -> usize {
        self.phi.n()
    }
}

fn triviality_expected(sys: &FastSlowSystem) -> bool {
    sys.crn.as_ref().is_some_and(|c| int_rank(&c.stoich.net.stoich) == c.split.r)
}

fn finish(sys: &FastSlowSystem, phi: &Parameterization, rhs: Vec<RatFun>, r: Option<RFMatrix>, path: ReducePath) -> Result<ReducedSystem, ReduceError> {
    let trivial = triviality_expected(sys);
    if trivial && !rhs.iter().all(RatFun::is_zero) {
        return Err(ReduceError::Inconsistency("rank N = rank N_f but the reduced right-hand side is not zero".into()));
    }
    let first_integrals = inherited_first_integrals(&sys.conservation, phi.exact().map_err(|_| ReduceError::NotExact)?, &rhs)?;
    Ok(ReducedSystem { rhs: ReducedRhs::exact(rhs), r, phi: phi.clone(), path, first_integrals, h0: sys.h0.clone(), trivial })
}

/// `v' = R(v) h1(Phi(v))`.
pub fn reduced_system(sys: &FastSlowSystem, phi: &Parameterization, r: RFMatrix, path: ReducePath) -> Result<ReducedSystem, ReduceError> {
    let f = phi.exact().map_err(|_| ReduceError::NotExact)?;
    let s = phi.s();
    let h1phi: Vec<RatFun> = sys.h1.iter().map(|p| RatFun::compose_poly(p, f)).collect();
    let rhs = r.mul_vec(&h1phi).map_err(|e| ReduceError::Invalid(e.to_string()))?;
    debug_assert!(rhs.iter().all(|c| c.nvars() == s));
    finish(sys, phi, rhs, Some(r), path)
}

/// Floating `v' = (L D Phi)^-1 L h1(Phi)` for parameterizations without an exact form.
pub fn reduced_system_numeric(sys: &FastSlowSystem, phi: &Parameterization, l: &QMatrix) -> ReducedSystem {
    let rhs = NumericRhs::ViaL { l: qmatrix_to_dmatrix(l), h1: CompiledField::new(&sys.h1), phi: phi.clone() };
    ReducedSystem {
        rhs: ReducedRhs::Numeric(rhs),
        r: None,
        phi: phi.clone(),
        path: ReducePath::ViaL,
        first_integrals: Vec::new(),
        h0: sys.h0.clone(),
        trivial: triviality_expected(sys),
    }
}

/// Closed form for a monomial parameterization with `B = L_f`:
/// `v' = diag(v) (L_f diag(Phi) L_f^T)^-1 L_f N_s (K_s o x*^Y_s o v^(L_f Y_s))`.
pub fn complex_balanced_reduced(sys: &FastSlowSystem, phi: &Parameterization) -> Result<ReducedSystem, ReduceError> {
    let crn = sys.crn.as_ref().ok_or_else(|| ReduceError::PreconditionViolated("closed form needs a reaction network".into()))?;
    let mono = phi.monomial.as_ref().ok_or_else(|| ReduceError::PreconditionViolated("parameterization is not monomial".into()))?;
    let lf = crn.l_f.to_q();
    if mono.b != lf {
        return Err(ReduceError::PreconditionViolated("exponent matrix differs from L_f".into()));
    }
    let slow = &crn.split.slow;
    let s = phi.s();
    let n = phi.n();
    match phi.exact() {
        Ok(f) => {
            let lrf: RFMatrix = lf.map(RatFun::zero(s), |c| RatFun::constant(s, c.clone()));
            let diag = Matrix::diag(f, RatFun::zero(s));
            let m = lrf.mul(&diag).and_then(|a| a.mul(&lrf.transpose())).expect("conformable");
            let mono_rates = monomial_pow(f, &slow.y).map_err(|e| ReduceError::Invalid(e.to_string()))?;
            let w: Vec<RatFun> = mono_rates.iter().zip(&slow.k).map(|(p, k)| p.scale(k)).collect();
            let ns: RFMatrix = slow.stoich.map(RatFun::zero(s), |c| RatFun::from_i64(s, *c));
            let b = lrf.mul(&ns).expect("conformable").mul_vec(&w).expect("conformable");
            let bm = Matrix::from_rows(b.into_iter().map(|x| vec![x]).collect(), 1, RatFun::zero(s));
            let y = rf_solve_linear(&m, &bm).map_err(|_| ReduceError::SingularLDPhi)?;
            let rhs: Vec<RatFun> = (0..s).map(|i| &RatFun::var(s, i) * &y[(i, 0)]).collect();
            finish(sys, phi, rhs, None, ReducePath::ComplexBalanced)
        }
        Err(_) => {
            let ys = (0..slow.m())
                .map(|j| (0..n).filter(|&i| slow.y[(i, j)] != 0).map(|i| (i, slow.y[(i, j)] as i32)).collect())
                .collect();
            let rhs = NumericRhs::ClosedForm {
                l: qmatrix_to_dmatrix(&lf),
                ns: DMatrix::from_fn(n, slow.m(), |i, j| slow.stoich[(i, j)] as f64),
                k: slow.k.iter().map(rational_to_f64).collect(),
                ys,
                mono: mono.clone(),
            };
            Ok(ReducedSystem {
                rhs: ReducedRhs::Numeric(rhs),
                r: None,
                phi: phi.clone(),
                path: ReducePath::ComplexBalanced,
                first_integrals: Vec::new(),
                h0: sys.h0.clone(),
                trivial: triviality_expected(sys),
            })
        }
    }
}
