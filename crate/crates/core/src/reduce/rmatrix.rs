use num_traits::Zero;
use tfr_exact::{rf_det, rf_rank, rf_solve_linear, Matrix, PolyMatrix, QMatrix, RFMatrix, RatFun, Rational};

use super::{PMuDecomposition, ReduceError};
use crate::manifold::{dphi, Parameterization};

/// Entrywise `m(Phi(v))`.
pub fn compose_matrix(m: &PolyMatrix, phi: &[RatFun], s: usize) -> RFMatrix {
    m.map(RatFun::zero(s), |p| RatFun::compose_poly(p, phi))
}

fn rf_identity(n: usize, s: usize) -> RFMatrix {
    Matrix::from_fn(n, n, RatFun::zero(s), |i, j| if i == j { RatFun::one(s) } else { RatFun::zero(s) })
}

fn rf_inverse(a: &RFMatrix, s: usize) -> Result<RFMatrix, ReduceError> {
    rf_solve_linear(a, &rf_identity(a.nrows(), s)).map_err(|_| ReduceError::NoInvertibleBlock)
}

/// `R(v) = (L(Phi(v)) D Phi(v))^-1 L(Phi(v))` for an `s x n` matrix `L` over the state variables.
pub fn compute_r_via_l(phi: &Parameterization, l: &PolyMatrix) -> Result<RFMatrix, ReduceError> {
    let f = phi.exact().map_err(|_| ReduceError::NotExact)?;
    let s = phi.s();
    if l.nrows() != s || l.ncols() != f.len() {
        return Err(ReduceError::Invalid(format!("L is {}x{}, expected {s}x{}", l.nrows(), l.ncols(), f.len())));
    }
    let lphi = compose_matrix(l, f, s);
    let m = lphi.mul(&dphi(phi)?).expect("conformable");
    rf_solve_linear(&m, &lphi).map_err(|_| ReduceError::SingularLDPhi)
}

/// Solves `R (D Phi | P(Phi)) = (I_s | 0)`.
pub fn compute_r_general(phi: &Parameterization, dec: &PMuDecomposition) -> Result<RFMatrix, ReduceError> {
    let f = phi.exact().map_err(|_| ReduceError::NotExact)?;
    let s = phi.s();
    let n = f.len();
    let aug = dphi(phi)?.hstack(&compose_matrix(&dec.p, f, s)).expect("same row count");
    if aug.ncols() != n {
        return Err(ReduceError::Invalid(format!("(D Phi | P) has {} columns, expected {n}", aug.ncols())));
    }
    let rhs = Matrix::from_fn(n, s, RatFun::zero(s), |i, j| if i == j { RatFun::one(s) } else { RatFun::zero(s) });
    let rt = rf_solve_linear(&aug.transpose(), &rhs).map_err(|_| ReduceError::SingularAugmentedMatrix)?;
    Ok(rt.transpose())
}

/// `R` from the block formula, with the rows used for `Phi_1`.
#[derive(Clone, Debug)]
pub struct GraphCaseR {
    pub r: RFMatrix,
    /// Rows of `Phi` forming `Phi_1`.
    pub rows: Vec<usize>,
    /// `Phi_1 = v` and `Phi_2 = 0`.
    pub qss: bool,
}

fn identity_rows(f: &[RatFun], s: usize) -> Option<Vec<usize>> {
    (0..s).map(|j| f.iter().position(|c| *c == RatFun::var(s, j))).collect()
}

fn lex_invertible_rows(d: &RFMatrix, s: usize) -> Option<Vec<usize>> {
    let n = d.nrows();
    let mut idx: Vec<usize> = (0..s).collect();
    if s > n {
        return None;
    }
    loop {
        if rf_det(&d.select_rows(&idx)).map(|x| !x.is_zero()).unwrap_or(false) {
            return Some(idx);
        }
        let pos = (0..s).rev().find(|&i| idx[i] < n - s + i)?;
        idx[pos] += 1;
        for j in pos + 1..s {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// With rows permuted so that `Phi = (Phi_1, Phi_2)` and `D Phi_1` is invertible:
/// `X = D Phi_2 D Phi_1^-1 P_1 - P_2`,
/// `R_1 = D Phi_1^-1 (I - P_1 X^-1 D Phi_2 D Phi_1^-1)`, `R_2 = D Phi_1^-1 P_1 X^-1`.
/// Rows with `Phi_i = v_j` are preferred for `Phi_1`; otherwise the first
/// lexicographic invertible choice.
pub fn compute_r_graph_case(phi: &Parameterization, dec: &PMuDecomposition) -> Result<GraphCaseR, ReduceError> {
    let f = phi.exact().map_err(|_| ReduceError::NotExact)?;
    let s = phi.s();
    let n = f.len();
    let d = dphi(phi)?;
    let rows = match identity_rows(f, s) {
        Some(rows) => rows,
        None => lex_invertible_rows(&d, s).ok_or(ReduceError::NoInvertibleBlock)?,
    };
    let rest: Vec<usize> = (0..n).filter(|i| !rows.contains(i)).collect();
    let p = compose_matrix(&dec.p, f, s);
    let d1 = d.select_rows(&rows);
    let d2 = d.select_rows(&rest);
    let p1 = p.select_rows(&rows);
    let p2 = p.select_rows(&rest);
    let d1inv = rf_inverse(&d1, s)?;
    let d2d1inv = d2.mul(&d1inv).expect("conformable");
    let x = d2d1inv.mul(&p1).expect("conformable").sub(&p2).expect("conformable");
    let xinv = rf_inverse(&x, s).map_err(|_| ReduceError::SingularAugmentedMatrix)?;
    let p1xinv = p1.mul(&xinv).expect("conformable");
    let inner = rf_identity(s, s).sub(&p1xinv.mul(&d2d1inv).expect("conformable")).expect("conformable");
    let r1 = d1inv.mul(&inner).expect("conformable");
    let r2 = d1inv.mul(&p1xinv).expect("conformable");
    let mut r = Matrix::zeros(s, n, RatFun::zero(s));
    for i in 0..s {
        for (k, &c) in rows.iter().enumerate() {
            r[(i, c)] = r1[(i, k)].clone();
        }
        for (k, &c) in rest.iter().enumerate() {
            r[(i, c)] = r2[(i, k)].clone();
        }
    }
    let phi1_is_v = rows.iter().enumerate().all(|(j, &i)| f[i] == RatFun::var(s, j));
    let qss = phi1_is_v && rest.iter().all(|&i| f[i].is_zero());
    Ok(GraphCaseR { r, rows, qss })
}

/// For `A` (`n x s`) and `B` (`s x n`) with `AB` an idempotent of rank `s`, whether `BA = I_s`.
pub fn lemma_ba_check(a: &QMatrix, b: &QMatrix) -> Result<bool, ReduceError> {
    let s = a.ncols();
    let ab = a.mul(b).map_err(|e| ReduceError::PreconditionViolated(e.to_string()))?;
    if ab.rank() != s {
        return Err(ReduceError::PreconditionViolated(format!("rank AB = {}, expected {s}", ab.rank())));
    }
    if ab.mul(&ab).expect("square") != ab {
        return Err(ReduceError::PreconditionViolated("AB is not idempotent".into()));
    }
    let ba = b.mul(a).map_err(|e| ReduceError::PreconditionViolated(e.to_string()))?;
    Ok(ba == Matrix::identity(s, Rational::zero()))
}

/// The same check over rational functions.
pub fn lemma_ba_check_rf(a: &RFMatrix, b: &RFMatrix) -> Result<bool, ReduceError> {
    let s = a.ncols();
    let nv = a.zero_elem().nvars();
    let ab = a.mul(b).map_err(|e| ReduceError::PreconditionViolated(e.to_string()))?;
    if rf_rank(&ab) != s {
        return Err(ReduceError::PreconditionViolated(format!("rank AB = {}, expected {s}", rf_rank(&ab))));
    }
    if ab.mul(&ab).expect("square") != ab {
        return Err(ReduceError::PreconditionViolated("AB is not idempotent".into()));
    }
    let ba = b.mul(a).map_err(|e| ReduceError::PreconditionViolated(e.to_string()))?;
    Ok(ba == rf_identity(s, nv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{check_noninteracting, rational_parameterization};
    use crate::model::parse_model;
    use crate::reduce::decompose_p_mu;
    use crate::system::FastSlowSystem;
    use tfr_exact::MultiPoly;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn example_one_r_at_point() {
        let sys = FastSlowSystem::from_model(&parse_model(include_str!("../../fixtures/example1.tfr")).unwrap()).unwrap();
        let split = &sys.crn.as_ref().unwrap().split;
        let set = check_noninteracting(split, &[2]).unwrap();
        let phi = rational_parameterization(&set, split).unwrap();
        let dec = decompose_p_mu(&sys).unwrap();
        let l = sys.crn.as_ref().unwrap().l_f.map(MultiPoly::zero(3), |c| MultiPoly::constant(3, q(*c)));
        let rl = compute_r_via_l(&phi, &l).unwrap();
        let rg = compute_r_general(&phi, &dec).unwrap();
        let gc = compute_r_graph_case(&phi, &dec).unwrap();
        assert_eq!(rl, rg);
        assert_eq!(rg, gc.r);
        assert_eq!(gc.rows, vec![0, 1]);
        assert!(!gc.qss);
        let at = rl.map(q(0), |f| f.eval(&[q(2), q(1)]).unwrap());
        let quarter = Rational::new(1.into(), 4.into());
        let want = QMatrix::from_i64_rows(&[vec![3, -2, 1], vec![-1, 2, 1]], 3).scale(&quarter);
        assert_eq!(at, want);
    }

    #[test]
    fn lemma_on_unit_vectors() {
        let a = QMatrix::from_i64_rows(&[vec![1], vec![0]], 1);
        let b = QMatrix::from_i64_rows(&[vec![1, 0]], 2);
        assert!(lemma_ba_check(&a, &b).unwrap());
        let z = QMatrix::from_i64_rows(&[vec![0], vec![0]], 1);
        assert!(matches!(lemma_ba_check(&z, &b), Err(ReduceError::PreconditionViolated(_))));
    }
}
