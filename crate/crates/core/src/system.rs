//! A model lowered to polynomial form: `x' = h0(x) + eps h1(x)` with the
//! structural data every reduction path needs.

use tfr_exact::{Matrix, MultiPoly, PolyMatrix, RatFun, Rational};

use crate::crn::{build_stoich, conservation_laws, deficiency, split_slow_fast, NetworkGraph, SlowFastSplit, StoichData};
use crate::model::{validate_model, Model, ModelError, ModelKind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SystemError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("model is not well formed: {0}")]
    Invalid(String),
    #[error(transparent)]
    Crn(#[from] crate::crn::CrnError),
}

/// Network-only structure.
#[derive(Clone, Debug)]
pub struct CrnInfo {
    pub stoich: StoichData,
    pub split: SlowFastSplit,
    pub fast_graph: NetworkGraph,
    pub deficiency_fast: usize,
    pub weakly_reversible_fast: bool,
    /// Canonical left-kernel basis of `N_f`, `s x n`.
    pub l_f: Matrix<i64>,
}

#[derive(Clone, Debug)]
pub struct FastSlowSystem {
    pub names: Vec<String>,
    pub h0: Vec<MultiPoly>,
    pub h1: Vec<MultiPoly>,
    pub r: usize,
    pub s: usize,
    pub crn: Option<CrnInfo>,
    /// Given `P` and `mu` of a generic model.
    pub given_p: Option<(PolyMatrix, Vec<MultiPoly>)>,
    /// Linear first integrals of the full system, one per row.
    pub conservation: Matrix<i64>,
    pub param_names: Vec<String>,
    pub user_phi: Option<Vec<RatFun>>,
    /// `s x n` rows over the state variables.
    pub user_l: Option<PolyMatrix>,
    pub epsilon: Rational,
}

impl FastSlowSystem {
    /// Lowers a parsed model. Fails on validation errors (warnings are ignored).
    pub fn from_model(model: &Model) -> Result<Self, SystemError> {
        let errors: Vec<String> = validate_model(model).into_iter().filter(|d| d.is_error()).map(|d| d.to_string()).collect();
        if !errors.is_empty() {
            return Err(SystemError::Invalid(errors.join("; ")));
        }
        let names = model.state_names();
        let n = names.len();
        let (h0, h1, r, crn, given_p, conservation) = match &model.kind {
            ModelKind::Crn(c) => {
                let stoich = build_stoich(c);
                let split = split_slow_fast(&stoich, c);
                let fast_graph = split.fast_graph();
                let deficiency_fast = deficiency(&fast_graph, &split.fast.stoich)?;
                let weakly_reversible_fast = fast_graph.weakly_reversible();
                let l_f = split.l_f();
                let conservation = conservation_laws(&stoich);
                let (h0, h1, r) = (split.h0(), split.h1(), split.r);
                let info = CrnInfo { stoich, split, fast_graph, deficiency_fast, weakly_reversible_fast, l_f };
                (h0, h1, r, Some(info), None, conservation)
            }
            ModelKind::Generic(g) => {
                let r = g.mu.len();
                let rows: Vec<Vec<MultiPoly>> =
                    g.p.iter().map(|row| row.iter().map(|e| e.to_poly(&names)).collect::<Result<_, _>>()).collect::<Result<_, _>>()?;
                let p = Matrix::from_rows(rows, r, MultiPoly::zero(n));
                let mu: Vec<MultiPoly> = g.mu.iter().map(|e| e.to_poly(&names)).collect::<Result<_, _>>()?;
                let h1: Vec<MultiPoly> = g.h1.iter().map(|e| e.to_poly(&names)).collect::<Result<_, _>>()?;
                let h0 = p.mul_vec(&mu).expect("validated dimensions");
                (h0, h1, r, None, Some((p, mu)), Matrix::int_zeros(0, n))
            }
        };
        let s = n - r;
        let param_names = crate::model::param_names(model, s);
        let user_phi = match &model.user.phi {
            Some(exprs) => Some(exprs.iter().map(|e| e.to_ratfun(&param_names)).collect::<Result<Vec<_>, _>>()?),
            None => None,
        };
        let user_l = match &model.user.l {
            Some(rows) => {
                let rows: Vec<Vec<MultiPoly>> =
                    rows.iter().map(|row| row.iter().map(|e| e.to_poly(&names)).collect::<Result<_, _>>()).collect::<Result<_, _>>()?;
                Some(Matrix::from_rows(rows, n, MultiPoly::zero(n)))
            }
            None => None,
        };
        Ok(FastSlowSystem { names, h0, h1, r, s, crn, given_p, conservation, param_names, user_phi, user_l, epsilon: model.epsilon.clone() })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    /// `Dh0(x)` as a polynomial matrix.
    pub fn jacobian_h0(&self) -> PolyMatrix {
        jacobian(&self.h0)
    }

    pub fn is_crn(&self) -> bool {
        self.crn.is_some()
    }
}

/// Jacobian of a polynomial vector, rows by component.
pub fn jacobian(f: &[MultiPoly]) -> PolyMatrix {
    let n = f.first().map(|p| p.nvars()).unwrap_or(0);
    Matrix::from_fn(f.len(), n, MultiPoly::zero(n), |i, j| f[i].partial(j))
}
