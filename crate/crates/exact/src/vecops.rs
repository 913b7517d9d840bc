use crate::matrix::Matrix;
use crate::ratfun::RatFun;
use crate::ExactError;

/// Columnwise monomials `x^Y`: entry `j` is `prod_i x_i^{Y[i][j]}`.
///
/// Negative exponents are allowed; a zero base under one is an error naming
/// the offending row.
pub fn monomial_pow(x: &[RatFun], y: &Matrix<i64>) -> Result<Vec<RatFun>, ExactError> {
    if y.nrows() != x.len() {
        return Err(ExactError::DimensionMismatch(format!(
            "{} bases against an exponent matrix with {} rows",
            x.len(),
            y.nrows()
        )));
    }
    let nv = x.first().map(RatFun::nvars).unwrap_or(0);
    (0..y.ncols())
        .map(|j| {
            let mut acc = RatFun::one(nv);
            for (i, xi) in x.iter().enumerate() {
                let e = y[(i, j)];
                if e == 0 {
                    continue;
                }
                if e < 0 && xi.is_zero() {
                    return Err(ExactError::ZeroBaseNegativeExponent(i));
                }
                let e32 = i32::try_from(e).map_err(|_| ExactError::DimensionMismatch(format!("exponent {e} too large")))?;
                acc = &acc * &xi.pow(e32)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Entrywise product.
pub fn hadamard(a: &[RatFun], b: &[RatFun]) -> Result<Vec<RatFun>, ExactError> {
    if a.len() != b.len() {
        return Err(ExactError::DimensionMismatch(format!("hadamard of lengths {} and {}", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).map(|(p, q)| p * q).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_columns() {
        let x = [RatFun::var(2, 0), RatFun::var(2, 1)];
        let y = Matrix::from_rows(vec![vec![1, 0, -1], vec![2, 1, 0]], 3, 0i64);
        let out = monomial_pow(&x, &y).unwrap();
        assert_eq!(out[0], &x[0] * &(&x[1] * &x[1]));
        assert_eq!(out[1], x[1]);
        assert_eq!(out[2], RatFun::one(2) / x[0].clone());
        let z = [RatFun::zero(2), RatFun::var(2, 1)];
        assert_eq!(monomial_pow(&z, &y), Err(ExactError::ZeroBaseNegativeExponent(0)));
    }
}
