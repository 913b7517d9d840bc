//! Linear algebra over `Q(x)` by fraction-free elimination.
//!
//! Rows are first cleared of denominators, giving a polynomial system. Bareiss
//! elimination keeps every intermediate entry a polynomial (each is a minor of
//! the cleared matrix), and back-substitution solves for `D * x` with `D` the
//! final pivot, so that a single rational-function division happens per entry.

use crate::gcd::poly_gcd;
use crate::matrix::Matrix;
use crate::poly::MultiPoly;
use crate::ratfun::RatFun;
use crate::ExactError;

pub type PolyMatrix = Matrix<MultiPoly>;
pub type RFMatrix = Matrix<RatFun>;

fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() {
        return a.clone();
    }
    let g = poly_gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).primitive()
}

/// Multiplies each row by the lcm of its denominators. Returns the polynomial
/// matrix and the row multipliers.
fn clear_rows(m: &RFMatrix) -> (PolyMatrix, Vec<MultiPoly>) {
    let n = m.zero_elem().nvars();
    let zero = MultiPoly::zero(n);
    let mut mults = Vec::with_capacity(m.nrows());
    let mut rows = Vec::with_capacity(m.nrows());
    for i in 0..m.nrows() {
        let l = m.row(i).iter().fold(MultiPoly::one(n), |acc, f| lcm(&acc, f.denom()));
        let row = m
            .row(i)
            .iter()
            .map(|f| {
                if f.is_zero() {
                    zero.clone()
                } else {
                    f.numer() * &l.div_exact(f.denom()).expect("denominator divides lcm")
                }
            })
            .collect();
        rows.push(row);
        mults.push(l);
    }
    (PolyMatrix::from_rows(rows, m.ncols(), zero), mults)
}

fn pick_pivot(m: &PolyMatrix, col: usize, from: usize) -> Option<usize> {
    (from..m.nrows())
        .filter(|&i| !m[(i, col)].is_zero())
        .min_by_key(|&i| (m[(i, col)].num_terms(), m[(i, col)].total_degree()))
}

/// Bareiss forward elimination with column skipping. Returns pivot columns and
/// the number of row swaps.
fn bareiss(m: &mut PolyMatrix, elim_cols: usize) -> (Vec<usize>, usize) {
    let n = m.zero_elem().nvars();
    let mut prev = MultiPoly::one(n);
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..elim_cols {
        if r == m.nrows() {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else { continue };
        if p != r {
            swap_rows(m, p, r);
            swaps += 1;
        }
        let piv = m[(r, c)].clone();
        for i in r + 1..m.nrows() {
            let f = m[(i, c)].clone();
            for j in c + 1..m.ncols() {
                let t = &(&piv * &m[(i, j)]) - &(&f * &m[(r, j)]);
                m[(i, j)] = if prev.is_one() { t } else { t.div_exact(&prev).expect("Bareiss division is exact") };
            }
            m[(i, c)] = MultiPoly::zero(n);
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    (pivots, swaps)
}

fn swap_rows(m: &mut PolyMatrix, a: usize, b: usize) {
    for j in 0..m.ncols() {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

/// Solves `A X = B` for square nonsingular `A`.
pub fn rf_solve_linear(a: &RFMatrix, b: &RFMatrix) -> Result<RFMatrix, ExactError> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n {
        return Err(ExactError::DimensionMismatch(format!(
            "solve with A {:?} and B {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let nv = a.zero_elem().nvars();
    let k = b.ncols();
    if n == 0 {
        return Ok(RFMatrix::zeros(0, k, RatFun::zero(nv)));
    }
    let (mut m, _) = clear_rows(&a.hstack(b)?);
    let (pivots, _) = bareiss(&mut m, n);
    if pivots.len() < n {
        return Err(ExactError::SingularMatrix);
    }
    let d = m[(n - 1, n - 1)].clone();
    let mut out = RFMatrix::zeros(n, k, RatFun::zero(nv));
    for col in 0..k {
        // y_i = D x_i is polynomial.
        let mut y = vec![MultiPoly::zero(nv); n];
        for i in (0..n).rev() {
            let mut acc = &d * &m[(i, n + col)];
            for j in i + 1..n {
                if !m[(i, j)].is_zero() && !y[j].is_zero() {
                    acc = &acc - &(&m[(i, j)] * &y[j]);
                }
            }
            y[i] = if i == n - 1 {
                m[(i, n + col)].clone()
            } else {
                acc.div_exact(&m[(i, i)]).ok_or(ExactError::SingularMatrix)?
            };
        }
        for i in 0..n {
            out[(i, col)] = RatFun::new(y[i].clone(), d.clone())?;
        }
    }
    Ok(out)
}

/// Rank over `Q(x)`.
pub fn rf_rank(a: &RFMatrix) -> usize {
    let (mut m, _) = clear_rows(a);
    let cols = m.ncols();
    bareiss(&mut m, cols).0.len()
}

pub fn rf_det(a: &RFMatrix) -> Result<RatFun, ExactError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(ExactError::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let nv = a.zero_elem().nvars();
    if n == 0 {
        return Ok(RatFun::one(nv));
    }
    let (mut m, mults) = clear_rows(a);
    let (pivots, swaps) = bareiss(&mut m, n);
    if pivots.len() < n {
        return Ok(RatFun::zero(nv));
    }
    let mut det = m[(n - 1, n - 1)].clone();
    if swaps % 2 == 1 {
        det = -det;
    }
    let den = mults.iter().fold(MultiPoly::one(nv), |acc, l| &acc * l);
    RatFun::new(det, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn x(i: usize) -> RatFun {
        RatFun::var(2, i)
    }

    fn c(v: i64) -> RatFun {
        RatFun::from_i64(2, v)
    }

    #[test]
    fn symbolic_two_by_two() {
        // [[x1, 1], [1, x2]] has determinant x1 x2 - 1
        let a = RFMatrix::from_rows(vec![vec![x(0), c(1)], vec![c(1), x(1)]], 2, RatFun::zero(2));
        let det = rf_det(&a).unwrap();
        assert_eq!(det, &(&x(0) * &x(1)) - &c(1));
        let b = RFMatrix::column(vec![c(1), c(0)], RatFun::zero(2));
        let sol = rf_solve_linear(&a, &b).unwrap();
        assert_eq!(sol[(0, 0)], &x(1) / &det);
        assert_eq!(sol[(1, 0)], &(-c(1)) / &det);
    }

    #[test]
    fn rational_entries_and_pivoting() {
        let inv = c(1) / x(0);
        let a = RFMatrix::from_rows(
            vec![vec![c(0), inv.clone(), c(1)], vec![c(2), c(0), x(1)], vec![c(1), c(1), c(0)]],
            3,
            RatFun::zero(2),
        );
        let b = RFMatrix::column(vec![c(1), c(2), c(3)], RatFun::zero(2));
        let sol = rf_solve_linear(&a, &b).unwrap();
        let back = a.mul(&sol).unwrap();
        assert_eq!(back, b);
        let det = rf_det(&a).unwrap();
        let expect = &(&inv * &x(1)) + &c(2);
        assert_eq!(det, expect);
        assert_eq!(rf_rank(&a), 3);
        let singular = RFMatrix::from_rows(vec![vec![x(0), x(1)], vec![x(0).scale(&int(2)), x(1).scale(&int(2))]], 2, RatFun::zero(2));
        assert_eq!(rf_rank(&singular), 1);
        assert_eq!(rf_solve_linear(&singular, &RFMatrix::column(vec![c(1), c(1)], RatFun::zero(2))), Err(ExactError::SingularMatrix));
    }
}
