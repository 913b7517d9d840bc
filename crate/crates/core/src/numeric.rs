//! Floating-point evaluation of exact objects, compiled once for repeated use.

use nalgebra::DMatrix;
use tfr_exact::{rational_to_f64, MultiPoly, QMatrix, RatFun};

/// Sparse polynomial with `f64` coefficients.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &MultiPoly) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let exps = m.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as i32)).collect();
                (rational_to_f64(c), exps)
            })
            .collect();
        CompiledPoly { terms }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (c, exps) in &self.terms {
            let mut t = *c;
            for &(i, e) in exps {
                t *= if e == 1 { x[i] } else { x[i].powi(e) };
            }
            acc += t;
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct CompiledRatFun {
    num: CompiledPoly,
    den: Option<CompiledPoly>,
}

impl CompiledRatFun {
    pub fn new(f: &RatFun) -> Self {
        let den = if f.denom().is_one() { None } else { Some(CompiledPoly::new(f.denom())) };
        CompiledRatFun { num: CompiledPoly::new(f.numer()), den }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.num.eval(x) / self.den.as_ref().map_or(1.0, |d| d.eval(x))
    }

    /// Value of the denominator (1 for polynomials).
    pub fn denominator(&self, x: &[f64]) -> f64 {
        self.den.as_ref().map_or(1.0, |d| d.eval(x))
    }
}

/// A vector of polynomials compiled together.
#[derive(Clone, Debug)]
pub struct CompiledField {
    comps: Vec<CompiledPoly>,
}

impl CompiledField {
    pub fn new(f: &[MultiPoly]) -> Self {
        CompiledField { comps: f.iter().map(CompiledPoly::new).collect() }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(&self.comps) {
            *o = p.eval(x);
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|p| p.eval(x)).collect()
    }
}

pub fn qmatrix_to_dmatrix(m: &QMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| rational_to_f64(&m[(i, j)]))
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Eigenvalues as `(re, im)` pairs.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<(f64, f64)> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone().complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
}

/// Greedy nearest matching of two eigenvalue multisets; returns the largest distance.
pub fn multiset_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &(ar, ai) in a {
        let mut best = None;
        for (j, &(br, bi)) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = ((ar - br).powi(2) + (ai - bi).powi(2)).sqrt();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        let (j, d) = best.expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use tfr_exact::Rational;

    #[test]
    fn compiled_matches_exact() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = &(&x * &x) - &y.scale(&Rational::new(3.into(), 2.into()));
        let c = CompiledPoly::new(&p);
        assert_eq!(c.eval(&[2.0, 4.0]), -2.0);
        let f = &RatFun::from_poly(p) / &RatFun::from_poly(&y + &MultiPoly::one(2));
        assert!((CompiledRatFun::new(&f).eval(&[2.0, 4.0]) + 0.4).abs() < 1e-15);
    }

    #[test]
    fn eigen_matching() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let e = eigenvalues(&m);
        assert!(multiset_distance(&e, &[(0.0, -1.0), (0.0, 1.0)]) < 1e-12);
    }
}
