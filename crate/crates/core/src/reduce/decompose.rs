use nalgebra::DMatrix;
use num_traits::Zero;
use serde::Serialize;
use tfr_exact::{rational_to_f64, Matrix, MultiPoly, PolyMatrix, QMatrix, Rational};

use super::{sample_points, ReduceError};
use crate::manifold::Parameterization;
use crate::system::{jacobian, FastSlowSystem};

/// `h0(x) = P(x) mu(x)` with `P` of size `n x r`.
#[derive(Clone, Debug)]
pub struct PMuDecomposition {
    pub p: PolyMatrix,
    pub mu: Vec<MultiPoly>,
    /// Rows of `h0` taken as `mu` (network models).
    pub row_indices: Option<Vec<usize>>,
    /// `P` when it is constant.
    pub p_const: Option<QMatrix>,
}

impl PMuDecomposition {
    pub fn r(&self) -> usize {
        self.mu.len()
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    /// `D mu(x)`, `r x n`.
    pub fn dmu(&self) -> PolyMatrix {
        if self.mu.is_empty() {
            return Matrix::zeros(0, self.n(), MultiPoly::zero(self.n()));
        }
        jacobian(&self.mu)
    }
}

fn greedy_row_basis(a: &QMatrix) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..a.nrows() {
        let mut trial = chosen.clone();
        trial.push(i);
        if a.select_rows(&trial).rank() == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

/// Network models: `mu` is the first lexicographic spanning set of rows of
/// `h0`, `P` the constant coefficient matrix, with columns scaled to coprime
/// integers (positive leading entry) and `mu` scaled inversely. Generic
/// models return the given factors.
pub fn decompose_p_mu(sys: &FastSlowSystem) -> Result<PMuDecomposition, ReduceError> {
    let n = sys.n();
    if let Some((p, mu)) = &sys.given_p {
        return Ok(PMuDecomposition { p: p.clone(), mu: mu.clone(), row_indices: None, p_const: constant_matrix(p) });
    }
    let crn = sys.crn.as_ref().ok_or_else(|| ReduceError::Invalid("model has neither a network nor P".into()))?;
    let nf = crn.split.fast.stoich.to_q();
    let rows = greedy_row_basis(&nf);
    let r = rows.len();
    if r != sys.r {
        return Err(ReduceError::Inconsistency(format!("row basis of size {r}, expected {}", sys.r)));
    }
    let b = nf.select_rows(&rows);
    let bt = b.transpose();
    let gram = b.mul(&bt).expect("conformable").inverse().map_err(|_| ReduceError::Inconsistency("Gram matrix of the row basis is singular".into()))?;
    let p = nf.mul(&bt).and_then(|m| m.mul(&gram)).expect("conformable");
    // Column scaling to coprime integers.
    let scaled = p.transpose().integer_rows().to_q().transpose();
    let mut mu = Vec::with_capacity(r);
    for (j, &row) in rows.iter().enumerate() {
        let lead = (0..n).find(|&i| !scaled[(i, j)].is_zero()).expect("nonzero column");
        let lambda = &p[(lead, j)] / &scaled[(lead, j)];
        mu.push(sys.h0[row].scale(&lambda));
    }
    let pp: PolyMatrix = scaled.map(MultiPoly::zero(n), |c| MultiPoly::constant(n, c.clone()));
    let check = pp.mul_vec(&mu).expect("conformable");
    if check != sys.h0 {
        return Err(ReduceError::Inconsistency("h0 differs from P mu".into()));
    }
    Ok(PMuDecomposition { p: pp, mu, row_indices: Some(rows), p_const: Some(scaled) })
}

fn constant_matrix(p: &PolyMatrix) -> Option<QMatrix> {
    p.try_map(Rational::zero(), |e| e.constant_value().ok_or(())).ok()
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    /// Whether `rank D mu(Phi(v)) = r` at each sample.
    pub per_sample: Vec<bool>,
    pub all: bool,
}

/// `rank D mu(Phi(v)) = r` at sampled positive `v`, exactly when `Phi` is exact.
pub fn functional_independence_check(dec: &PMuDecomposition, phi: &Parameterization, samples: usize, seed: u64) -> IndependenceReport {
    let dmu = dec.dmu();
    let r = dec.r();
    let points = sample_points(phi.s(), samples, seed);
    let per_sample: Vec<bool> = points
        .iter()
        .map(|v| match phi.eval_exact(v) {
            Some(x) => dmu.eval_at(&x).rank() == r,
            None if phi.is_exact() => false,
            None => {
                let vf: Vec<f64> = v.iter().map(rational_to_f64).collect();
                let x = phi.eval_f64(&vf);
                let m = DMatrix::from_fn(r, dec.n(), |i, j| dmu[(i, j)].eval_f64(&x));
                numeric_rank(&m) == r
            }
        })
        .collect();
    let all = per_sample.iter().all(|b| *b);
    IndependenceReport { per_sample, all }
}

pub(crate) fn numeric_rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&x| x > 1e-9 * top.max(f64::MIN_POSITIVE)).count()
}
