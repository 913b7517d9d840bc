use serde::Serialize;
use tfr_exact::{Matrix, RatFun, Rational};

use super::ReduceError;

/// `psi~ = psi o Phi` for a linear conservation law `psi`.
#[derive(Clone, Debug, Serialize)]
pub struct FirstIntegral {
    pub psi: Vec<i64>,
    #[serde(skip)]
    pub tilde: RatFun,
    pub constant: bool,
}

/// Pulls every conservation law back along `Phi` and checks `D psi~ . rhs = 0` exactly.
pub fn inherited_first_integrals(cons: &Matrix<i64>, phi: &[RatFun], rhs: &[RatFun]) -> Result<Vec<FirstIntegral>, ReduceError> {
    let s = rhs.len();
    let mut out = Vec::with_capacity(cons.nrows());
    for row in cons.to_rows() {
        if row.len() != phi.len() {
            return Err(ReduceError::Invalid("conservation law length differs from n".into()));
        }
        let mut tilde = RatFun::zero(s);
        for (c, f) in row.iter().zip(phi) {
            if *c != 0 {
                tilde = &tilde + &f.scale(&Rational::from_integer((*c).into()));
            }
        }
        let constant = tilde.is_constant();
        if !constant {
            let mut lie = RatFun::zero(s);
            for (j, g) in tilde.gradient().iter().enumerate() {
                lie = &lie + &(g * &rhs[j]);
            }
            if !lie.is_zero() {
                return Err(ReduceError::Inconsistency(format!("pulled-back conservation law {row:?} is not a first integral")));
            }
        }
        out.push(FirstIntegral { psi: row, tilde, constant });
    }
    Ok(out)
}
