use num_traits::ToPrimitive;
use tfr_exact::{QMatrix, RatFun};

use super::{default_param_names, ManifoldError, MonomialData, ParamKind, Parameterization, XStar};

/// `Phi(v) = x* o v^B` for an `s x n` exponent matrix `B` of full row rank.
///
/// The exact form is kept when `x*` is exact and `B` is integral; otherwise
/// only floating evaluation is available.
pub fn monomial_parameterization(x_star: XStar, b: QMatrix) -> Result<Parameterization, ManifoldError> {
    let n = x_star.len();
    if b.ncols() != n {
        return Err(ManifoldError::Invalid(format!("exponent matrix has {} columns, expected {n}", b.ncols())));
    }
    let s = b.nrows();
    let rank = b.rank();
    if rank != s {
        return Err(ManifoldError::RankDeficientB { rank, expected: s });
    }
    let integral = b.entries().all(|e| e.is_integer());
    let phi = match (&x_star, integral) {
        (XStar::Exact(x), true) => {
            let mut out = Vec::with_capacity(n);
            for (i, xi) in x.iter().enumerate() {
                let mut f = RatFun::constant(s, xi.clone());
                for j in 0..s {
                    let e = b[(j, i)].to_integer().to_i32().ok_or_else(|| ManifoldError::Invalid("exponent too large".into()))?;
                    if e != 0 {
                        f = &f * &RatFun::var(s, j).pow(e).expect("nonzero variable");
                    }
                }
                out.push(f);
            }
            Some(out)
        }
        _ => None,
    };
    let data = MonomialData { x_star, b };
    Ok(Parameterization::from_parts(ParamKind::Monomial, default_param_names(s), phi, Some(data), "v > 0"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::dphi;
    use tfr_exact::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn example_one_kernel_basis() {
        let b = QMatrix::from_i64_rows(&[vec![1, -1, 0], vec![1, 0, 1]], 3);
        let p = monomial_parameterization(XStar::Exact(vec![q(1), q(1), q(1)]), b).unwrap();
        let phi = p.exact().unwrap();
        let v1 = RatFun::var(2, 0);
        let v2 = RatFun::var(2, 1);
        assert_eq!(phi[0], &v1 * &v2);
        assert_eq!(phi[1], v1.recip().unwrap());
        assert_eq!(phi[2], v2);
        let closed = dphi(&p).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(closed[(i, j)], phi[i].partial(j));
            }
        }
        assert_eq!(p.eval_f64(&[1.0, 1.0]), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn rank_deficient_exponents() {
        let b = QMatrix::from_i64_rows(&[vec![1, 1], vec![2, 2]], 2);
        assert_eq!(
            monomial_parameterization(XStar::Float(vec![1.0, 1.0]), b).unwrap_err(),
            ManifoldError::RankDeficientB { rank: 1, expected: 2 }
        );
    }

    #[test]
    fn fractional_exponents_are_numeric_only() {
        let b = QMatrix::from_rows(vec![vec![Rational::new(2.into(), 3.into()), q(1)]], 2, q(0));
        let p = monomial_parameterization(XStar::Exact(vec![q(2), q(1)]), b).unwrap();
        assert!(!p.is_exact());
        let x = p.eval_f64(&[8.0]);
        assert!((x[0] - 8.0).abs() < 1e-12 && (x[1] - 8.0).abs() < 1e-12);
    }
}
