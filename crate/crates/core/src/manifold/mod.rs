//! Parameterizations `Phi: W -> Z` of the critical manifold `Z = {h0 = 0}`.

mod balanced;
mod monomial;
mod noninteracting;
mod verify;

pub use balanced::{complex_balanced_state, node_balance_residual_exact, node_balance_residual_f64, BalancedState};
pub use monomial::monomial_parameterization;
pub use noninteracting::{check_noninteracting, find_noninteracting_sets, rational_parameterization, NonInteractingSet};
pub use verify::{verify_parameterization, Check, ParamReport};

use nalgebra::DMatrix;
use serde::Serialize;
use tfr_exact::{rational_to_f64, Matrix, QMatrix, RFMatrix, RatFun, Rational};

use crate::numeric::CompiledRatFun;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ManifoldError {
    #[error("the linear system for the eliminated species is singular")]
    SingularLinearSystem,
    #[error("fast subnetwork is not weakly reversible")]
    NotWeaklyReversible,
    #[error("no positive complex-balanced state found (last relative residual {0:e})")]
    NoPositiveSolution(f64),
    #[error("exponent matrix has rank {rank}, expected {expected}")]
    RankDeficientB { rank: usize, expected: usize },
    #[error("parameterization has no exact form")]
    NotExact,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamKind {
    Rational,
    Monomial,
    User,
}

/// Positive reference point of a monomial parameterization.
#[derive(Clone, Debug, PartialEq)]
pub enum XStar {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

impl XStar {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            XStar::Exact(v) => v.iter().map(rational_to_f64).collect(),
            XStar::Float(v) => v.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, XStar::Exact(_))
    }

    pub fn len(&self) -> usize {
        match self {
            XStar::Exact(v) => v.len(),
            XStar::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `Phi(v) = x* o v^B`, `B` being `s x n`.
#[derive(Clone, Debug)]
pub struct MonomialData {
    pub x_star: XStar,
    pub b: QMatrix,
}

impl MonomialData {
    pub fn eval_f64(&self, v: &[f64]) -> Vec<f64> {
        let x = self.x_star.to_f64();
        let b = self.b.to_f64_rows();
        (0..x.len()).map(|i| x[i] * (0..v.len()).map(|j| v[j].powf(b[j][i])).product::<f64>()).collect()
    }

    /// `diag(Phi) B^T diag(1/v)`.
    pub fn jacobian_f64(&self, v: &[f64]) -> DMatrix<f64> {
        let phi = self.eval_f64(v);
        let b = self.b.to_f64_rows();
        DMatrix::from_fn(phi.len(), v.len(), |i, j| phi[i] * b[j][i] / v[j])
    }
}

#[derive(Clone, Debug)]
pub struct Parameterization {
    pub kind: ParamKind,
    pub param_names: Vec<String>,
    /// Exact components, absent only for monomial maps with a floating `x*`
    /// or non-integer exponents.
    pub phi: Option<Vec<RatFun>>,
    pub monomial: Option<MonomialData>,
    /// Species solved for, when built from a non-interacting set.
    pub eliminated: Option<Vec<usize>>,
    pub domain_note: String,
    pub warnings: Vec<String>,
    compiled: Option<Vec<CompiledRatFun>>,
}

impl Parameterization {
    pub(crate) fn from_parts(
        kind: ParamKind,
        param_names: Vec<String>,
        phi: Option<Vec<RatFun>>,
        monomial: Option<MonomialData>,
        domain_note: impl Into<String>,
    ) -> Self {
        let compiled = phi.as_ref().map(|p| p.iter().map(CompiledRatFun::new).collect());
        Parameterization { kind, param_names, phi, monomial, eliminated: None, domain_note: domain_note.into(), warnings: Vec::new(), compiled }
    }

    /// A parameterization typed in by the user.
    pub fn user(phi: Vec<RatFun>, param_names: Vec<String>) -> Self {
        Self::from_parts(ParamKind::User, param_names, Some(phi), None, "as given")
    }

    pub fn n(&self) -> usize {
        match (&self.phi, &self.monomial) {
            (Some(p), _) => p.len(),
            (None, Some(m)) => m.x_star.len(),
            (None, None) => 0,
        }
    }

    pub fn s(&self) -> usize {
        self.param_names.len()
    }

    pub fn exact(&self) -> Result<&[RatFun], ManifoldError> {
        self.phi.as_deref().ok_or(ManifoldError::NotExact)
    }

    pub fn is_exact(&self) -> bool {
        self.phi.is_some()
    }

    pub fn eval_f64(&self, v: &[f64]) -> Vec<f64> {
        match (&self.compiled, &self.monomial) {
            (Some(c), _) => c.iter().map(|f| f.eval(v)).collect(),
            (None, Some(m)) => m.eval_f64(v),
            (None, None) => Vec::new(),
        }
    }

    pub fn eval_exact(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        self.phi.as_ref()?.iter().map(|f| f.eval(v)).collect()
    }

    /// Numeric Jacobian from the exact derivative or the monomial identity.
    pub fn jacobian_f64(&self, v: &[f64]) -> DMatrix<f64> {
        if let Some(m) = &self.monomial {
            return m.jacobian_f64(v);
        }
        let d = dphi(self).expect("exact parameterization");
        DMatrix::from_fn(d.nrows(), d.ncols(), |i, j| d[(i, j)].eval_f64(v))
    }
}

/// Exact Jacobian `D Phi(v)`, `n x s`. Monomial maps use
/// `diag(x* o v^B) B^T diag(1/v)`; others differentiate symbolically.
pub fn dphi(p: &Parameterization) -> Result<RFMatrix, ManifoldError> {
    let phi = p.exact()?;
    let s = p.s();
    if let Some(m) = &p.monomial {
        let vinv: Vec<RatFun> = (0..s).map(|j| RatFun::var(s, j).recip().expect("variable")).collect();
        return Ok(Matrix::from_fn(phi.len(), s, RatFun::zero(s), |i, j| {
            let bji = &m.b[(j, i)];
            if num_traits::Zero::is_zero(bji) {
                RatFun::zero(s)
            } else {
                &phi[i].scale(bji) * &vinv[j]
            }
        }));
    }
    Ok(Matrix::from_fn(phi.len(), s, RatFun::zero(s), |i, j| phi[i].partial(j)))
}

/// Default names `v1..vs`.
pub fn default_param_names(s: usize) -> Vec<String> {
    (1..=s).map(|i| format!("v{i}")).collect()
}
